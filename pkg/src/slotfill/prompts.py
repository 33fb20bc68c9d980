"""Template instantiation: bind subject, object type and candidate objects.

The engine emits prompts carrying the neutral ``[MASK]`` marker; scorer
clients translate that marker into whatever surface their backend expects.
Instantiation is pure, so identical inputs always produce byte-identical
prompts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import MASK, OBJECT_SLOT, SUBJECT_SLOT, PromptTemplate, TemplateError

_ALTERNATION = re.compile(r"\((\w+)\|(\w+)\)")
_RESIDUAL = re.compile(r"\[[XY]\]")


@dataclass(frozen=True, slots=True)
class InstantiatedPrompt:
    text: str
    template_id: str
    subject_label: str
    bound_object: str | None = None


def _check_filled(text: str, template_id: str) -> None:
    if text.count(MASK) != 1:
        raise TemplateError(f"template {template_id!r}: instantiated prompt lost its mask")
    leftover = _RESIDUAL.search(text)
    if leftover:
        raise TemplateError(
            f"template {template_id!r}: residual placeholder {leftover.group()!r} after instantiation"
        )


def instantiate_fill(
    template: PromptTemplate, subject: str, object_type: str | None = None
) -> InstantiatedPrompt:
    """Bind [X] (and [Y] when present) in a fill or count template."""
    if not subject.strip():
        raise TemplateError(f"template {template.template_id!r}: empty subject")
    if template.has_object_slot() and object_type is None:
        raise TemplateError(
            f"template {template.template_id!r} carries {OBJECT_SLOT} but no object type was given"
        )
    text = template.text.replace(SUBJECT_SLOT, subject)
    if object_type is not None:
        text = text.replace(OBJECT_SLOT, object_type)
    _check_filled(text, template.template_id)
    return InstantiatedPrompt(text=text, template_id=template.template_id, subject_label=subject)


def instantiate_verify(template: PromptTemplate, subject: str, obj: str) -> InstantiatedPrompt:
    """Bind [X] and [Y] in a verification template; records the bound object."""
    if not subject.strip():
        raise TemplateError(f"template {template.template_id!r}: empty subject")
    if not obj.strip():
        raise TemplateError(f"template {template.template_id!r}: empty object")
    if not template.has_object_slot():
        raise TemplateError(
            f"template {template.template_id!r} has no {OBJECT_SLOT}; cannot bind an object"
        )
    text = template.text.replace(SUBJECT_SLOT, subject).replace(OBJECT_SLOT, obj)
    _check_filled(text, template.template_id)
    return InstantiatedPrompt(
        text=text, template_id=template.template_id, subject_label=subject, bound_object=obj
    )


def expand_alternations(template_id: str, text: str) -> list[tuple[str, str]]:
    """Expand one "(her|his)"-style alternation into two concrete templates.

    Applied at config-load time; templates without alternations pass through
    unchanged as a single (id, text) pair.
    """
    match = _ALTERNATION.search(text)
    if match is None:
        return [(template_id, text)]
    first, second = match.group(1), match.group(2)
    return [
        (f"{template_id}--{first}", text[: match.start()] + first + text[match.end() :]),
        (f"{template_id}--{second}", text[: match.start()] + second + text[match.end() :]),
    ]
