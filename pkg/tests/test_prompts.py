import pytest

from slotfill.model import Style, TemplateError, make_template
from slotfill.prompts import expand_alternations, instantiate_fill, instantiate_verify


class TestTemplateValidation:
    def test_style_cloze(self):
        assert make_template("t", "[X] and [MASK] share a border.").style is Style.CLOZE

    def test_style_suffix(self):
        assert make_template("t", "[X] is a well-known [MASK]").style is Style.SUFFIX
        assert make_template("t", "People of [X] mostly speak in [MASK].").style is Style.SUFFIX

    def test_style_prefix(self):
        assert make_template("t", "[MASK] is the main language of [X].").style is Style.PREFIX

    def test_zero_masks_rejected(self):
        with pytest.raises(TemplateError, match="exactly one"):
            make_template("t", "[X] has a border.")

    def test_two_masks_rejected(self):
        with pytest.raises(TemplateError, match="exactly one"):
            make_template("t", "[X] has [MASK] and [MASK].")

    def test_verify_requires_object_slot(self):
        with pytest.raises(TemplateError, match=r"\[Y\]"):
            make_template("t", "[X] is correct? Answer: [MASK].", verify=True)


class TestInstantiateFill:
    def test_plain_subject(self):
        template = make_template("t", "[X] and [MASK] share a border.")
        prompt = instantiate_fill(template, "Singapore")
        assert prompt.text == "Singapore and [MASK] share a border."
        assert prompt.bound_object is None

    def test_object_type_slot(self):
        template = make_template("t", "[MASK], which is a [Y], borders [X].")
        prompt = instantiate_fill(template, "Alabama", "state")
        assert prompt.text == "[MASK], which is a state, borders Alabama."

    def test_empty_subject_rejected(self):
        template = make_template("t", "[X] plays [MASK].")
        with pytest.raises(TemplateError, match="empty subject"):
            instantiate_fill(template, "")

    def test_missing_object_type_rejected(self):
        template = make_template("t", "[MASK], which is a [Y], borders [X].")
        with pytest.raises(TemplateError, match="no object type"):
            instantiate_fill(template, "Alabama")

    def test_pure(self):
        template = make_template("t", "[X] plays [MASK].")
        assert instantiate_fill(template, "A. R. Rahman") == instantiate_fill(template, "A. R. Rahman")


class TestInstantiateVerify:
    def test_binds_both_slots(self):
        template = make_template("t", "[X] and [Y] share a border. Is this correct? Answer: [MASK].")
        prompt = instantiate_verify(template, "Italy", "France")
        assert prompt.text == "Italy and France share a border. Is this correct? Answer: [MASK]."
        assert prompt.bound_object == "France"

    def test_second_example(self):
        template = make_template("t", "[X] plays [Y]. Is this correct? Answer: [MASK].")
        prompt = instantiate_verify(template, "A. R. Rahman", "guitar")
        assert prompt.text == "A. R. Rahman plays guitar. Is this correct? Answer: [MASK]."

    def test_empty_object_rejected(self):
        template = make_template("t", "[X] plays [Y]. Is this correct? Answer: [MASK].")
        with pytest.raises(TemplateError, match="empty object"):
            instantiate_verify(template, "A. R. Rahman", "")


def test_no_residual_placeholders_in_any_instantiation():
    texts = [
        "[X] and [MASK] share a border.",
        "[MASK] is the main language of [X].",
        "[X] has [MASK], which is an atom.",
        "[MASK], which is a [Y], borders [X].",
    ]
    for text in texts:
        template = make_template("t", text)
        object_type = "state" if template.has_object_slot() else None
        prompt = instantiate_fill(template, "Alabama", object_type)
        assert "[X]" not in prompt.text and "[Y]" not in prompt.text
        assert prompt.text.count("[MASK]") == 1


def test_alternation_expansion():
    pairs = expand_alternations("performed", "[X] performed on (her|his) [MASK], which is an instrument.")
    assert pairs == [
        ("performed--her", "[X] performed on her [MASK], which is an instrument."),
        ("performed--his", "[X] performed on his [MASK], which is an instrument."),
    ]


def test_no_alternation_passthrough():
    assert expand_alternations("t", "[X] plays [MASK].") == [("t", "[X] plays [MASK].")]
