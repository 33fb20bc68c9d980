"""Precision/recall/F1 scoring of selected objects against ground truth.

max-F1 is the quality ceiling of a ranked list: the best F1 achievable by
truncating it at the optimal rank, found by scanning every truncation point.
Ties on F1 resolve to the smallest rank, since a smaller selection with equal
F1 is strictly safer. Macro averages are unweighted: tuples within a
relation, then relations within the overall row.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import AbstractSet, Mapping

from .model import CandidateList

SCORE_FIELDS = ("precision", "recall", "f1", "max_f1", "optimal_k", "hits_at_1")


def prf(selected: AbstractSet[str], truth: AbstractSet[str]) -> tuple[float, float, float]:
    inter = len(selected & truth)
    precision = inter / len(selected) if selected else 0.0
    recall = inter / len(truth) if truth else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def max_f1(clist: CandidateList, truth: AbstractSet[str]) -> tuple[float, int]:
    """Best F1 over all truncation ranks k in 0..len(list), with the smallest
    maximizing k. Equivalent to brute-forcing prf over every prefix; the
    incremental form keeps the identical float operations."""
    best_f1, best_k = 0.0, 0
    hits = 0
    n_truth = len(truth)
    for k, (token, _prob) in enumerate(clist.entries, start=1):
        if token in truth:
            hits += 1
        if not hits:
            continue
        precision = hits / k
        recall = hits / n_truth
        f1 = 2 * precision * recall / (precision + recall)
        if f1 > best_f1:
            best_f1, best_k = f1, k
    return best_f1, best_k


def hits_at_1(clist: CandidateList, truth: AbstractSet[str]) -> int:
    if not clist.entries:
        return 0
    return 1 if clist.entries[0][0] in truth else 0


@dataclass(frozen=True, slots=True)
class TupleScore:
    precision: float
    recall: float
    f1: float
    max_f1: float
    optimal_k: int
    hits_at_1: int


def score_tuple(
    clist: CandidateList, selected: AbstractSet[str], truth: AbstractSet[str]
) -> TupleScore:
    """All per-tuple figures: selection-phase P/R/F1 plus ranking-phase ceiling."""
    precision, recall, f1 = prf(selected, truth)
    ceiling, optimal_k = max_f1(clist, truth)
    return TupleScore(
        precision=precision,
        recall=recall,
        f1=f1,
        max_f1=ceiling,
        optimal_k=optimal_k,
        hits_at_1=hits_at_1(clist, truth),
    )


@dataclass(frozen=True)
class EvalReport:
    per_tuple: dict[tuple[str, str], TupleScore]
    per_relation: dict[str, dict[str, float]]
    overall: dict[str, float]

    def to_json_dict(self) -> dict:
        return {
            "per_tuple": {
                f"{rel}::{subj}": {f: getattr(score, f) for f in SCORE_FIELDS}
                for (rel, subj), score in sorted(self.per_tuple.items())
            },
            "per_relation": {rel: dict(sorted(v.items())) for rel, v in sorted(self.per_relation.items())},
            "overall": dict(sorted(self.overall.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def macro_average(scores: Mapping[tuple[str, str], TupleScore]) -> EvalReport:
    """Unweighted means per relation, then an unweighted mean of those means."""
    if not scores:
        raise ValueError("macro_average requires at least one tuple score")
    by_relation: dict[str, list[TupleScore]] = {}
    for (relation_id, _subject), score in scores.items():
        by_relation.setdefault(relation_id, []).append(score)
    per_relation = {
        relation_id: {
            fld: _mean([float(getattr(s, fld)) for s in rel_scores]) for fld in SCORE_FIELDS
        }
        for relation_id, rel_scores in by_relation.items()
    }
    overall = {
        fld: _mean([rel[fld] for rel in per_relation.values()]) for fld in SCORE_FIELDS
    }
    return EvalReport(per_tuple=dict(scores), per_relation=per_relation, overall=overall)
