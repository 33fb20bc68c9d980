import json
from pathlib import Path

import pytest

from slotfill.model import CandidateList

REPO_ROOT = Path(__file__).resolve().parent.parent
DEMO_DIR = REPO_ROOT / "demo"

# Candidate lists transcribed from published example output; ground truths
# are the known-correct object sets for those subjects.
SINGAPORE_BORDERS = (
    ("malaysia", 0.7), ("thailand", 0.1), ("indonesia", 0.1), ("vietnam", 0.02),
    ("myanmar", 0.02), ("china", 0.01), ("taiwan", 0.01),
)
SINGAPORE_BORDERS_TRUTH = frozenset({"malaysia", "indonesia"})

WATER_PARTS = (
    ("oxygen", 0.17), ("hydrogen", 0.17), ("carbon", 0.05), ("nitrogen", 0.02),
    ("sodium", 0.01), ("mercury", 0.004), ("sulfur", 0.003),
)
WATER_PARTS_TRUTH = frozenset({"oxygen", "hydrogen"})

SODIUM_CHLORIDE_PARTS = (
    ("carbon", 0.15), ("hydrogen", 0.09), ("oxygen", 0.03), ("silicon", 0.01),
    ("nitrogen", 0.01), ("sulfur", 0.006), ("sodium", 0.006),
)
SODIUM_CHLORIDE_TRUTH = frozenset({"sodium", "chlorine"})

SINGAPORE_LANGS = (
    ("english", 0.7), ("malay", 0.18), ("chinese", 0.03), ("tamil", 0.03),
    ("mandarin", 0.02), ("indonesian", 0.005), ("arabic", 0.003),
)
SINGAPORE_LANGS_TRUTH = frozenset({"english", "malay", "tamil", "mandarin"})


def make_candidates(entries, relation_id="rel", subject_label="subject", template_id="tpl"):
    return CandidateList(
        relation_id=relation_id,
        subject_label=subject_label,
        template_id=template_id,
        entries=tuple(entries),
    )


@pytest.fixture
def singapore_borders():
    return make_candidates(SINGAPORE_BORDERS, "country_borders", "singapore")


@pytest.fixture
def water_parts():
    return make_candidates(WATER_PARTS, "compound_has_parts", "water")


@pytest.fixture
def sodium_chloride_parts():
    return make_candidates(SODIUM_CHLORIDE_PARTS, "compound_has_parts", "sodium chloride")


@pytest.fixture
def singapore_langs():
    return make_candidates(SINGAPORE_LANGS, "country_official_lang", "singapore")


def write_jsonl(path: Path, records) -> Path:
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path
