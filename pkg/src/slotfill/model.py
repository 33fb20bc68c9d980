"""Shared domain types for the extraction pipeline.

All types are frozen dataclasses: immutable after construction and safe to
share across threads. Invariants are enforced at construction time so that
downstream code never has to re-validate.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field

MASK = "[MASK]"
SUBJECT_SLOT = "[X]"
OBJECT_SLOT = "[Y]"

_TRAILING_PUNCT = ".?!,;: "


class SlotfillError(Exception):
    """Base class for all package errors."""


class TemplateError(SlotfillError):
    pass


class DatasetError(SlotfillError):
    pass


class ContractError(SlotfillError):
    """An internal invariant or cross-module contract was violated."""


class ConfigError(SlotfillError):
    pass


def normalize(text: str) -> str:
    """Canonical string form: NFC, lowercase, trimmed, single internal spaces.

    Idempotent; used for subjects, objects and candidate tokens so that
    ground-truth matching is plain equality.
    """
    return " ".join(unicodedata.normalize("NFC", text).lower().split())


class Split(str, enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class Style(str, enum.Enum):
    PREFIX = "prefix"
    SUFFIX = "suffix"
    CLOZE = "cloze"


class Mechanism(str, enum.Enum):
    TOP_K = "top_k"
    PROB_X = "prob_x"
    CUMUL_X = "cumul_x"
    COUNT_PROBE = "count_probe"
    VERIFY_PROBE = "verify_probe"


class CountForm(str, enum.Enum):
    ALPHABETIC = "alphabetic"
    NUMERIC = "numeric"
    NONE = "none"


@dataclass(frozen=True, slots=True)
class PromptTemplate:
    template_id: str
    text: str
    style: Style

    def has_object_slot(self) -> bool:
        return OBJECT_SLOT in self.text


def _derive_style(text: str) -> Style:
    if text.startswith(MASK):
        return Style.PREFIX
    if text.rstrip(_TRAILING_PUNCT).endswith(MASK):
        return Style.SUFFIX
    return Style.CLOZE


def make_template(template_id: str, text: str, *, verify: bool = False) -> PromptTemplate:
    """Validate placeholder structure and derive the mask-position style.

    Every template carries exactly one mask and exactly one subject slot;
    the object slot appears at most once, and exactly once for verification
    templates.
    """
    problems = []
    if text.count(MASK) != 1:
        problems.append(f"expected exactly one {MASK}, found {text.count(MASK)}")
    if text.count(SUBJECT_SLOT) != 1:
        problems.append(f"expected exactly one {SUBJECT_SLOT}, found {text.count(SUBJECT_SLOT)}")
    if text.count(OBJECT_SLOT) > 1:
        problems.append(f"{OBJECT_SLOT} may appear at most once")
    if verify and OBJECT_SLOT not in text:
        problems.append(f"verification template must contain {OBJECT_SLOT}")
    if problems:
        raise TemplateError(f"template {template_id!r} ({text!r}): " + "; ".join(problems))
    return PromptTemplate(template_id=template_id, text=text, style=_derive_style(text))


@dataclass(frozen=True, slots=True)
class CountTemplate:
    """A count-probe template tagged with the number surface it targets."""

    template: PromptTemplate
    form: CountForm


@dataclass(frozen=True, slots=True)
class RelationSpec:
    """One multi-valued relation: identifiers, templates, admissible objects."""

    relation_id: str
    subject_type: str
    object_type_labels: tuple[str, ...]
    fill_templates: tuple[PromptTemplate, ...]
    count_templates: tuple[CountTemplate, ...]
    verify_template: PromptTemplate
    type_vocabulary: frozenset[str]


def validate_relation(spec: RelationSpec) -> RelationSpec:
    """Check every RelationSpec invariant; returns the spec unchanged on success."""
    if not spec.relation_id:
        raise ConfigError("relation_id must be non-empty")
    if not spec.fill_templates:
        raise ConfigError(f"relation {spec.relation_id!r}: no fill templates")
    for tpl in spec.fill_templates:
        make_template(tpl.template_id, tpl.text)
    for ct in spec.count_templates:
        make_template(ct.template.template_id, ct.template.text)
        if ct.form not in (CountForm.ALPHABETIC, CountForm.NUMERIC):
            raise ConfigError(
                f"relation {spec.relation_id!r}: count template {ct.template.template_id!r} "
                f"has invalid form {ct.form!r}"
            )
    make_template(spec.verify_template.template_id, spec.verify_template.text, verify=True)
    if not spec.type_vocabulary:
        raise ConfigError(f"relation {spec.relation_id!r}: empty type vocabulary")
    for token in spec.type_vocabulary:
        if normalize(token) != token:
            raise ConfigError(
                f"relation {spec.relation_id!r}: vocabulary entry {token!r} is not normalized"
            )
    return spec


@dataclass(frozen=True, slots=True)
class SubjectEntry:
    """One subject with its complete ground-truth object set.

    ``subject_label`` is the normalized identity used for joins and matching;
    ``surface`` keeps the original casing for prompt instantiation, since
    scorers are case-sensitive.
    """

    relation_id: str
    subject_label: str
    surface: str
    ground_truth: frozenset[str]
    split: Split

    def __post_init__(self) -> None:
        if not self.ground_truth:
            raise DatasetError(
                f"({self.relation_id}, {self.subject_label}): empty ground truth"
            )


@dataclass(frozen=True, slots=True)
class CandidateList:
    """Ranked (token, prob) candidates for one (subject, relation, template).

    Entries are sorted by probability, non-increasing, with ties kept in
    original scorer rank; tokens are unique. Scorer-derived lists also keep
    the truncated-distribution bound (probability sum <= 1); hit-rate
    calibration may legitimately break that bound, so the sum is checked by
    the factory used on ingestion paths, not here.
    """

    relation_id: str
    subject_label: str
    template_id: str
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        probs = [p for _, p in self.entries]
        if any(p2 > p1 for p1, p2 in zip(probs, probs[1:])):
            raise ContractError(
                f"candidate list ({self.relation_id}, {self.subject_label}): "
                "entries not sorted by non-increasing probability"
            )
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ContractError(
                f"candidate list ({self.relation_id}, {self.subject_label}): "
                "probability outside [0, 1]"
            )
        tokens = [t for t, _ in self.entries]
        if len(set(tokens)) != len(tokens):
            raise ContractError(
                f"candidate list ({self.relation_id}, {self.subject_label}): duplicate tokens"
            )

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.entries)

    @property
    def prob_sum(self) -> float:
        return sum(p for _, p in self.entries)


def scored_candidate_list(
    relation_id: str,
    subject_label: str,
    template_id: str,
    entries: tuple[tuple[str, float], ...],
) -> CandidateList:
    """Construct a scorer-derived list, enforcing the distribution bound."""
    clist = CandidateList(relation_id, subject_label, template_id, entries)
    if clist.prob_sum > 1.0 + 1e-6:
        raise ContractError(
            f"candidate list ({relation_id}, {subject_label}): "
            f"probabilities sum to {clist.prob_sum:.6f} > 1"
        )
    return clist


@dataclass(frozen=True, slots=True)
class SelectionOutcome:
    """The accepted object subset for one tuple, with its provenance."""

    relation_id: str
    subject_label: str
    mechanism: Mechanism
    parameter: float | int | None
    selected: tuple[str, ...] = field(default=())
