"""The five mechanisms that turn a ranked candidate list into an accepted set.

All functions are pure and preserve list order. Boundary semantics are load
bearing and differ on purpose:

* prob-x keeps entries with probability greater than OR EQUAL to x;
* the verification probe keeps an object only when p_yes - p_no is STRICTLY
  greater than alpha;
* cumul-x keeps the longest prefix whose probability sum stays within x, so
  the entry that would push the sum past x is excluded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import CandidateList, ContractError, Mechanism, SelectionOutcome

_WORD_NUMBERS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19, "twenty": 20,
}


@dataclass(frozen=True, slots=True)
class MechanismParams:
    """Per-relation parameter bundle; each mechanism reads only its own field."""

    k: int = 1
    x_prob: float = 0.0
    x_cumul: float = 1.0
    alpha: float = 0.0
    count_override: int | None = None


def select_top_k(clist: CandidateList, k: int) -> SelectionOutcome:
    if k < 0:
        raise ContractError(f"k must be >= 0, got {k}")
    selected = clist.tokens[:k]
    return SelectionOutcome(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        mechanism=Mechanism.TOP_K,
        parameter=k,
        selected=selected,
    )


def select_prob_x(clist: CandidateList, x: float) -> SelectionOutcome:
    if not 0.0 <= x <= 1.0:
        raise ContractError(f"x must be in [0, 1], got {x}")
    selected = tuple(token for token, prob in clist.entries if prob >= x)
    return SelectionOutcome(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        mechanism=Mechanism.PROB_X,
        parameter=x,
        selected=selected,
    )


def select_cumul_x(clist: CandidateList, x: float) -> SelectionOutcome:
    if not 0.0 <= x <= 1.0:
        raise ContractError(f"x must be in [0, 1], got {x}")
    selected: list[str] = []
    total = 0.0
    for token, prob in clist.entries:
        if total + prob > x:
            break
        total += prob
        selected.append(token)
    return SelectionOutcome(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        mechanism=Mechanism.CUMUL_X,
        parameter=x,
        selected=tuple(selected),
    )


def find_count_token(tokens: Sequence[str]) -> tuple[int, int] | None:
    """First token naming a positive integer; returns (value, 0-based rank)."""
    for rank, token in enumerate(tokens):
        if token.isdigit():
            value = int(token)
            if value > 0:
                return value, rank
            continue
        value = _WORD_NUMBERS.get(token.lower())
        if value is not None:
            return value, rank
    return None


def parse_count(tokens: Sequence[str]) -> int | None:
    """Integer value of the highest-ranked count token, digit or word form."""
    hit = find_count_token(tokens)
    return hit[0] if hit else None


def select_count_probe(clist: CandidateList, predicted: int) -> SelectionOutcome:
    if predicted < 0:
        raise ContractError(f"predicted count must be >= 0, got {predicted}")
    outcome = select_top_k(clist, predicted)
    return SelectionOutcome(
        relation_id=outcome.relation_id,
        subject_label=outcome.subject_label,
        mechanism=Mechanism.COUNT_PROBE,
        parameter=predicted,
        selected=outcome.selected,
    )


def select_verify(
    clist: CandidateList,
    yes_no: Mapping[str, tuple[float, float]],
    alpha: float,
) -> SelectionOutcome:
    for token in clist.tokens:
        if token not in yes_no:
            raise ContractError(
                f"verification scores missing for candidate {token!r} of "
                f"({clist.relation_id}, {clist.subject_label})"
            )
    selected = tuple(
        token for token in clist.tokens if yes_no[token][0] - yes_no[token][1] > alpha
    )
    return SelectionOutcome(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        mechanism=Mechanism.VERIFY_PROBE,
        parameter=alpha,
        selected=selected,
    )


def apply_mechanism(
    mechanism: Mechanism,
    clist: CandidateList,
    params: MechanismParams,
    *,
    predicted_count: int | None = None,
    yes_no: Mapping[str, tuple[float, float]] | None = None,
) -> SelectionOutcome:
    """Dispatch a mechanism by name with its parameter bundle.

    A count probe without a usable prediction selects nothing: a visible
    failure beats a silent default.
    """
    if mechanism is Mechanism.TOP_K:
        return select_top_k(clist, params.k)
    if mechanism is Mechanism.PROB_X:
        return select_prob_x(clist, params.x_prob)
    if mechanism is Mechanism.CUMUL_X:
        return select_cumul_x(clist, params.x_cumul)
    if mechanism is Mechanism.COUNT_PROBE:
        count = params.count_override if params.count_override is not None else predicted_count
        if count is None:
            return SelectionOutcome(
                relation_id=clist.relation_id,
                subject_label=clist.subject_label,
                mechanism=Mechanism.COUNT_PROBE,
                parameter=None,
                selected=(),
            )
        return select_count_probe(clist, count)
    if mechanism is Mechanism.VERIFY_PROBE:
        if yes_no is None:
            raise ContractError("verify_probe requires yes/no scores")
        return select_verify(clist, yes_no, params.alpha)
    raise ContractError(f"unknown mechanism {mechanism!r}")
