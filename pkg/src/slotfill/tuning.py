"""Grid search for per-relation mechanism parameters on the train split.

Each candidate value is scored by the mean per-tuple F1 it yields on the
train tuples; the winner is frozen and later applied unchanged to dev/test.
Ties resolve to the smallest value for k and the x thresholds and to the
largest value for the verification alpha.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import AbstractSet, Mapping, Sequence

from .metrics import prf
from .model import CandidateList, ContractError, Mechanism
from .selection import MechanismParams, apply_mechanism

# (candidate list, ground truth, yes/no scores or None)
TrainTuple = tuple[CandidateList, AbstractSet[str], Mapping[str, tuple[float, float]] | None]

DEFAULT_GRIDS: dict[Mechanism, tuple] = {
    Mechanism.TOP_K: tuple(range(1, 26)),
    Mechanism.PROB_X: tuple(round(i * 0.01, 2) for i in range(0, 51)),
    Mechanism.CUMUL_X: tuple(round(i * 0.05, 2) for i in range(1, 21)),
    Mechanism.VERIFY_PROBE: tuple(round(-0.10 + i * 0.01, 2) for i in range(0, 61)),
}

# Count probes have no learned parameter: the per-subject prediction is the cutoff.
TUNABLE = tuple(DEFAULT_GRIDS)


def _params_for(mechanism: Mechanism, value: float | int) -> MechanismParams:
    if mechanism is Mechanism.TOP_K:
        return MechanismParams(k=int(value))
    if mechanism is Mechanism.PROB_X:
        return MechanismParams(x_prob=float(value))
    if mechanism is Mechanism.CUMUL_X:
        return MechanismParams(x_cumul=float(value))
    if mechanism is Mechanism.VERIFY_PROBE:
        return MechanismParams(alpha=float(value))
    raise ContractError(f"mechanism {mechanism.value} has no tunable parameter")


def mean_train_f1(
    mechanism: Mechanism, train_tuples: Sequence[TrainTuple], value: float | int
) -> float:
    params = _params_for(mechanism, value)
    total = 0.0
    for clist, truth, yes_no in train_tuples:
        outcome = apply_mechanism(mechanism, clist, params, yes_no=yes_no)
        total += prf(set(outcome.selected), truth)[2]
    return total / len(train_tuples)


@dataclass(frozen=True, slots=True)
class TunedParams:
    relation_id: str
    mechanism: Mechanism
    parameter: float | int
    train_f1: float
    grid: tuple


def tune(
    mechanism: Mechanism,
    train_tuples: Sequence[TrainTuple],
    grid: Sequence[float | int],
    *,
    relation_id: str = "",
    jobs: int = 1,
) -> TunedParams:
    if not grid:
        raise ContractError("tune requires a non-empty grid")
    if not train_tuples:
        raise ContractError("tune requires non-empty train tuples")

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            means = list(pool.map(lambda v: mean_train_f1(mechanism, train_tuples, v), grid))
    else:
        means = [mean_train_f1(mechanism, train_tuples, value) for value in grid]

    best_mean = max(means)
    winners = [value for value, mean in zip(grid, means) if mean == best_mean]
    if mechanism is Mechanism.VERIFY_PROBE:
        chosen = max(winners)
    else:
        chosen = min(winners)
    return TunedParams(
        relation_id=relation_id,
        mechanism=mechanism,
        parameter=chosen,
        train_f1=best_mean,
        grid=tuple(grid),
    )
