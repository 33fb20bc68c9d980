"""Rank-then-select extraction of multi-valued relational knowledge from
masked-LM scorers: generate ranked candidate objects per (subject, relation)
prompt, apply parameterized selection mechanisms, tune their parameters on a
train split, and evaluate against complete ground-truth object sets."""

from .model import (
    CandidateList,
    ContractError,
    CountForm,
    CountTemplate,
    DatasetError,
    Mechanism,
    PromptTemplate,
    RelationSpec,
    SelectionOutcome,
    Split,
    SubjectEntry,
    TemplateError,
    make_template,
    normalize,
    validate_relation,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateList",
    "ContractError",
    "CountForm",
    "CountTemplate",
    "DatasetError",
    "Mechanism",
    "PromptTemplate",
    "RelationSpec",
    "SelectionOutcome",
    "Split",
    "SubjectEntry",
    "TemplateError",
    "make_template",
    "normalize",
    "validate_relation",
    "__version__",
]
