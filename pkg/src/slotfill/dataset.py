"""Dataset ingestion: JSON-lines of subjects with complete object sets.

One record per line: ``{"relation": ..., "subject": ..., "objects": [...],
"split": optional}``. An explicit split field wins; otherwise entries are
assigned deterministically in file order per relation, first ``train`` then
``dev``, with everything past those counts going to ``test``. An optional
seeded shuffle reorders records before assignment; the default is plain file
order so that runs are reproducible without bookkeeping.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from .model import DatasetError, Split, SubjectEntry, normalize

DEFAULT_SPLIT_SIZES = (100, 50, 50)


def _parse_record(line: str, lineno: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise DatasetError(f"line {lineno}: expected an object record")
    for key in ("relation", "subject", "objects"):
        if key not in record:
            raise DatasetError(f"line {lineno}: missing field {key!r}")
    if not isinstance(record["objects"], list) or not record["objects"]:
        raise DatasetError(f"line {lineno}: empty ground truth")
    return record


def load_dataset(
    path: str | Path,
    split_sizes: tuple[int, int, int] = DEFAULT_SPLIT_SIZES,
    shuffle_seed: int | None = None,
) -> list[SubjectEntry]:
    path = Path(path)
    records: list[tuple[int, dict]] = []
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            records.append((lineno, _parse_record(line, lineno)))

    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(records)

    train_n, dev_n, _test_n = split_sizes
    per_relation: Counter[str] = Counter()
    seen: set[tuple[str, str]] = set()
    entries: list[SubjectEntry] = []
    for lineno, record in records:
        relation = str(record["relation"])
        surface = " ".join(str(record["subject"]).split())
        label = normalize(surface)
        if not label:
            raise DatasetError(f"line {lineno}: empty subject")
        key = (relation, label)
        if key in seen:
            raise DatasetError(f"line {lineno}: duplicate subject ({relation}, {label})")
        seen.add(key)

        objects = frozenset(normalize(str(obj)) for obj in record["objects"])
        if not objects or "" in objects:
            raise DatasetError(f"line {lineno}: empty ground truth")

        if "split" in record and record["split"] is not None:
            try:
                split = Split(record["split"])
            except ValueError as exc:
                raise DatasetError(f"line {lineno}: unknown split {record['split']!r}") from exc
        else:
            position = per_relation[relation]
            if position < train_n:
                split = Split.TRAIN
            elif position < train_n + dev_n:
                split = Split.DEV
            else:
                split = Split.TEST
        per_relation[relation] += 1

        entries.append(
            SubjectEntry(
                relation_id=relation,
                subject_label=label,
                surface=surface,
                ground_truth=objects,
                split=split,
            )
        )
    return entries


def save_dataset(entries: Iterable[SubjectEntry], path: str | Path) -> None:
    """Serialize entries with explicit splits; round-trips through load_dataset."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for entry in entries:
            record = {
                "relation": entry.relation_id,
                "subject": entry.surface,
                "objects": sorted(entry.ground_truth),
                "split": entry.split.value,
            }
            handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


def by_split(entries: Sequence[SubjectEntry], split: Split) -> list[SubjectEntry]:
    return [e for e in entries if e.split is split]
