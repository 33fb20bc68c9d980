"""Turn raw scorer output into a clean candidate list.

Cleaning normalizes tokens, drops stopwords and anything outside the
relation's type vocabulary, and merges duplicates keeping the
highest-probability occurrence. The output is always a subsequence of the
input, so the scorer's ranking is never reordered, and cleaning twice is a
no-op.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from importlib import resources

from .model import CandidateList, ContractError, normalize, scored_candidate_list
from .scorer import ScorerResponse

log = logging.getLogger(__name__)

# Pinned checksum of the shipped stopword list; results are only comparable
# across runs if the list is byte-identical.
STOPWORDS_SHA256 = "d887ee2f4614b4882fdcaee84e74a5b43255d3e4641bd22279d2894d9705d33f"


def load_stopwords() -> frozenset[str]:
    data = resources.files("slotfill.data").joinpath("stopwords.txt").read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != STOPWORDS_SHA256:
        raise ContractError(
            f"stopword list checksum mismatch: expected {STOPWORDS_SHA256}, got {digest}"
        )
    return frozenset(line.strip() for line in data.decode("utf-8").splitlines() if line.strip())


@dataclass(frozen=True, slots=True)
class FilterConfig:
    stopwords: frozenset[str]
    type_vocabulary: frozenset[str]
    keep_top: int | None = None

    def __post_init__(self) -> None:
        overlap = self.stopwords & self.type_vocabulary
        if overlap:
            raise ContractError(
                f"stopwords and type vocabulary overlap: {sorted(overlap)[:5]}"
            )


def clean_candidates(
    raw: ScorerResponse,
    cfg: FilterConfig,
    *,
    relation_id: str,
    subject_label: str,
    template_id: str,
) -> CandidateList:
    kept: list[tuple[str, float]] = []
    seen: set[str] = set()
    for token, prob in raw.entries:
        norm = normalize(token)
        if not norm or norm in cfg.stopwords or norm not in cfg.type_vocabulary:
            continue
        if norm in seen:
            continue  # first occurrence has the highest probability: entries are sorted
        seen.add(norm)
        kept.append((norm, prob))
        if cfg.keep_top is not None and len(kept) >= cfg.keep_top:
            break
    if not kept:
        log.warning(
            "all candidates filtered out for (%s, %s, %s)", relation_id, subject_label, template_id
        )
    return scored_candidate_list(relation_id, subject_label, template_id, tuple(kept))


def mean_retained_length(lists: list[CandidateList]) -> float:
    """Average post-filter list length, reported as a sanity statistic."""
    if not lists:
        return 0.0
    return sum(len(c.entries) for c in lists) / len(lists)
