"""Configuration files: one YAML document per relation, one per run.

Relation files name the templates, the probe templates and the path of the
type-vocabulary file (one normalized token per line). Run files bind a
dataset, a set of relations, scorer settings and grids. All relative paths
resolve against the file that mentions them, so a config tree can be moved
wholesale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .model import (
    ConfigError,
    CountForm,
    CountTemplate,
    Mechanism,
    RelationSpec,
    make_template,
    normalize,
    validate_relation,
)
from .prompts import expand_alternations
from .tuning import DEFAULT_GRIDS


def load_vocabulary(path: Path) -> frozenset[str]:
    if not path.exists():
        raise ConfigError(f"vocabulary file not found: {path}")
    tokens = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        token = line.strip()
        if not token or token.startswith("#"):
            continue
        tokens.add(normalize(token))
    if not tokens:
        raise ConfigError(f"vocabulary file is empty: {path}")
    return frozenset(tokens)


def _templates_from(raw: list[dict], what: str, path: Path):
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{path}: {what} must be a non-empty list")
    out = []
    for item in raw:
        try:
            template_id, text = str(item["id"]), str(item["text"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: malformed {what} entry {item!r}") from exc
        for expanded_id, expanded_text in expand_alternations(template_id, text):
            out.append((expanded_id, expanded_text, item))
    return out


def load_relation(path: str | Path) -> RelationSpec:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"relation config not found: {path}")
    raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping")
    try:
        relation_id = str(raw["relation"])
        vocab_rel = str(raw["type_vocabulary"])
        fill_raw = raw["fill_templates"]
        count_raw = raw.get("count_templates", [])
        verify_raw = raw["verify_template"]
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from exc

    fills = tuple(
        make_template(tid, text) for tid, text, _ in _templates_from(fill_raw, "fill_templates", path)
    )
    counts = []
    for tid, text, item in _templates_from(count_raw, "count_templates", path) if count_raw else []:
        try:
            form = CountForm(item["form"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(
                f"{path}: count template {tid!r} needs form 'alphabetic' or 'numeric'"
            ) from exc
        counts.append(CountTemplate(make_template(tid, text), form))
    verify = make_template(str(verify_raw["id"]), str(verify_raw["text"]), verify=True)

    spec = RelationSpec(
        relation_id=relation_id,
        subject_type=str(raw.get("subject_type", "")),
        object_type_labels=tuple(str(x) for x in raw.get("object_type_labels", [])),
        fill_templates=fills,
        count_templates=tuple(counts),
        verify_template=verify,
        type_vocabulary=load_vocabulary((path.parent / vocab_rel).resolve()),
    )
    return validate_relation(spec)


@dataclass(frozen=True)
class ScorerSettings:
    mode: str = "fixture"  # fixture | http
    fixtures: Path | None = None
    url: str | None = None
    model: str = "fixture"
    top_n: int = 500
    count_top_n: int = 50
    cache: Path | None = None
    yes_token: str = "yes"
    no_token: str = "no"


@dataclass(frozen=True)
class RunConfig:
    path: Path
    dataset: Path
    relation_paths: tuple[Path, ...]
    split_sizes: tuple[int, int, int]
    shuffle: bool
    out_dir: Path
    scorer: ScorerSettings
    grids: dict[Mechanism, tuple] = field(default_factory=dict)
    hits: Path | None = None
    jobs: int = 1
    seed: int = 0

    def grid_for(self, mechanism: Mechanism) -> tuple:
        return self.grids.get(mechanism, DEFAULT_GRIDS[mechanism])

    @property
    def shuffle_seed(self) -> int | None:
        # every bit of optional randomness keys off the single run seed
        return self.seed if self.shuffle else None


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path).resolve()
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping")
    base = path.parent

    def resolve(p) -> Path:
        return (base / str(p)).resolve()

    try:
        dataset = resolve(raw["dataset"])
        relations = tuple(resolve(p) for p in raw["relations"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from exc
    if not relations:
        raise ConfigError(f"{path}: no relations configured")

    split_sizes = tuple(int(x) for x in raw.get("split_sizes", (100, 50, 50)))
    if len(split_sizes) != 3 or any(x < 0 for x in split_sizes):
        raise ConfigError(f"{path}: split_sizes must be three non-negative counts")

    scorer_raw = raw.get("scorer", {})
    mode = str(scorer_raw.get("mode", "fixture"))
    if mode not in ("fixture", "http"):
        raise ConfigError(f"{path}: scorer mode must be 'fixture' or 'http', got {mode!r}")
    scorer = ScorerSettings(
        mode=mode,
        fixtures=resolve(scorer_raw["fixtures"]) if scorer_raw.get("fixtures") else None,
        url=scorer_raw.get("url"),
        model=str(scorer_raw.get("model", "fixture")),
        top_n=int(scorer_raw.get("top_n", 500)),
        count_top_n=int(scorer_raw.get("count_top_n", 50)),
        cache=resolve(scorer_raw["cache"]) if scorer_raw.get("cache") else None,
        yes_token=str(scorer_raw.get("yes_token", "yes")),
        no_token=str(scorer_raw.get("no_token", "no")),
    )

    grids: dict[Mechanism, tuple] = {}
    for name, values in (raw.get("grids") or {}).items():
        try:
            mechanism = Mechanism(name)
        except ValueError as exc:
            raise ConfigError(f"{path}: unknown mechanism {name!r} in grids") from exc
        if not isinstance(values, list) or not values:
            raise ConfigError(f"{path}: grid for {name} must be a non-empty list")
        grids[mechanism] = tuple(values)

    return RunConfig(
        path=path,
        dataset=dataset,
        relation_paths=relations,
        split_sizes=split_sizes,  # type: ignore[arg-type]
        shuffle=bool(raw.get("shuffle", False)),
        out_dir=resolve(raw.get("out_dir", "out")),
        scorer=scorer,
        grids=grids,
        hits=resolve(raw["hits"]) if raw.get("hits") else None,
        jobs=int(raw.get("jobs", 1)),
        seed=int(raw.get("seed", 0)),
    )
