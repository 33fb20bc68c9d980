"""Composite probing recipes: fill, count and verify.

Each recipe glues the prompt engine to a scorer and produces exactly the
inputs the selection mechanisms consume. Recipes never mutate their inputs;
verification fans out one scorer call per candidate with bounded
parallelism and assembles results in candidate order regardless of
completion order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .model import (
    CandidateList,
    ContractError,
    CountForm,
    RelationSpec,
    SubjectEntry,
)
from .postprocess import FilterConfig, clean_candidates
from .prompts import instantiate_fill, instantiate_verify
from .scorer import Scorer, ScorerRequest, token_probs
from .selection import find_count_token

COUNT_SEARCH_DEPTH = 50


@dataclass(frozen=True, slots=True)
class CountPrediction:
    relation_id: str
    subject: str
    template_id: str
    predicted: int | None
    source: CountForm

    def __post_init__(self) -> None:
        if (self.predicted is None) != (self.source is CountForm.NONE):
            raise ContractError("predicted must be present exactly when source is not none")


@dataclass(frozen=True, slots=True)
class VerifyScores:
    relation_id: str
    subject: str
    template_id: str
    pairs: tuple[tuple[str, float, float], ...]  # (object, p_yes, p_no)

    @property
    def objects(self) -> tuple[str, ...]:
        return tuple(obj for obj, _, _ in self.pairs)

    def as_map(self) -> dict[str, tuple[float, float]]:
        return {obj: (p_yes, p_no) for obj, p_yes, p_no in self.pairs}


def generate_candidates(
    spec: RelationSpec,
    template_id: str,
    subject: SubjectEntry,
    scorer: Scorer,
    filter_cfg: FilterConfig,
    *,
    top_n: int = 500,
    object_type: str | None = None,
) -> CandidateList:
    """One cleaned candidate list for (relation, template, subject)."""
    template = next(
        (t for t in spec.fill_templates if t.template_id == template_id), None
    )
    if template is None:
        raise ContractError(f"relation {spec.relation_id!r} has no fill template {template_id!r}")
    if template.has_object_slot() and object_type is None:
        object_type = spec.object_type_labels[0] if spec.object_type_labels else None
    prompt = instantiate_fill(template, subject.surface, object_type)
    raw = scorer.fill_mask(ScorerRequest(prompt=prompt, top_n=top_n))
    return clean_candidates(
        raw,
        filter_cfg,
        relation_id=spec.relation_id,
        subject_label=subject.subject_label,
        template_id=template_id,
    )


def run_count_probe(
    spec: RelationSpec,
    subject: SubjectEntry,
    scorer: Scorer,
    *,
    search_depth: int = COUNT_SEARCH_DEPTH,
) -> CountPrediction:
    """Probe every count template and keep the best-ranked integer token.

    The prediction comes from whichever template ranks an integer token
    higher; on a rank tie the numeric-form template wins. No integer token
    within the search depth on any template means no prediction.
    """
    if not spec.count_templates:
        raise ContractError(f"relation {spec.relation_id!r} has no count templates")
    best: tuple[int, int, int, str, CountForm] | None = None  # (rank, form_priority, value, template_id, form)
    for ct in spec.count_templates:
        prompt = instantiate_fill(ct.template, subject.surface)
        response = scorer.fill_mask(ScorerRequest(prompt=prompt, top_n=search_depth))
        hit = find_count_token([token for token, _ in response.entries][:search_depth])
        if hit is None:
            continue
        value, rank = hit
        form_priority = 0 if ct.form is CountForm.NUMERIC else 1
        key = (rank, form_priority, value, ct.template.template_id, ct.form)
        if best is None or key[:2] < best[:2]:
            best = key
    if best is None:
        return CountPrediction(
            relation_id=spec.relation_id,
            subject=subject.subject_label,
            template_id="",
            predicted=None,
            source=CountForm.NONE,
        )
    _rank, _prio, value, template_id, form = best
    return CountPrediction(
        relation_id=spec.relation_id,
        subject=subject.subject_label,
        template_id=template_id,
        predicted=value,
        source=form,
    )


def run_verify_probe(
    spec: RelationSpec,
    subject: SubjectEntry,
    candidates: CandidateList,
    scorer: Scorer,
    *,
    yes_token: str = "yes",
    no_token: str = "no",
    jobs: int = 1,
) -> VerifyScores:
    """One yes/no probe per candidate object, assembled in candidate order."""

    def probe(obj: str) -> tuple[str, float, float]:
        prompt = instantiate_verify(spec.verify_template, subject.surface, obj)
        scores = token_probs(scorer, prompt, [yes_token, no_token])
        return obj, scores.probs[yes_token], scores.probs[no_token]

    tokens = candidates.tokens
    if jobs > 1 and len(tokens) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pairs = tuple(pool.map(probe, tokens))
    else:
        pairs = tuple(probe(obj) for obj in tokens)
    return VerifyScores(
        relation_id=spec.relation_id,
        subject=subject.subject_label,
        template_id=spec.verify_template.template_id,
        pairs=pairs,
    )
