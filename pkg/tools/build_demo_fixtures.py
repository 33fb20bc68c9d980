#!/usr/bin/env python3
"""Regenerate the demo fixture files under demo/.

The fill-template distributions are transcriptions of published example
candidate lists; count, verify and hit-count fixtures are synthetic but
deterministic, engineered so that every selection mechanism has something
meaningful to do on the demo data. Run from the repository root:

    python tools/build_demo_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

DEMO = Path(__file__).resolve().parent.parent / "demo"

# --------------------------------------------------------------------------
# transcribed candidate lists: subject -> ordered (token, prob)

BORDERS = {
    "Germany": [("poland", 0.14), ("austria", 0.12), ("france", 0.09), ("italy", 0.06),
                ("belgium", 0.05), ("russia", 0.04), ("switzerland", 0.04)],
    "India": [("pakistan", 0.34), ("bangladesh", 0.19), ("myanmar", 0.1), ("nepal", 0.1),
              ("china", 0.05), ("iran", 0.02), ("bhutan", 0.02)],
    "Palau": [("japan", 0.06), ("indonesia", 0.05), ("taiwan", 0.04), ("fiji", 0.03),
              ("china", 0.02), ("australia", 0.02), ("philippines", 0.01)],
    "Malta": [("gibraltar", 0.12), ("italy", 0.11), ("cyprus", 0.07), ("ireland", 0.06),
              ("greece", 0.05), ("tunisia", 0.04), ("serbia", 0.04)],
    "Singapore": [("malaysia", 0.7), ("thailand", 0.1), ("indonesia", 0.1), ("vietnam", 0.02),
                  ("myanmar", 0.02), ("china", 0.01), ("taiwan", 0.01)],
}

PARTS = {
    "Calcium Carbonate": [("carbon", 0.47), ("hydrogen", 0.03), ("oxygen", 0.02),
                          ("calcium", 0.01), ("silicon", 0.01), ("nitrogen", 0.002),
                          ("sulfur", 0.002)],
    "Dopamine": [("hydrogen", 0.09), ("nitrogen", 0.05), ("carbon", 0.05), ("oxygen", 0.05),
                 ("calcium", 0.02), ("sodium", 0.011), ("sulfur", 0.009)],
    "Sodium Chloride": [("carbon", 0.15), ("hydrogen", 0.09), ("oxygen", 0.03),
                        ("silicon", 0.01), ("nitrogen", 0.01), ("sulfur", 0.006),
                        ("sodium", 0.006)],
    "Thiocyanic Acid": [("hydrogen", 0.1), ("carbon", 0.1), ("oxygen", 0.03),
                        ("nitrogen", 0.02), ("sulfur", 0.01), ("silicon", 0.003),
                        ("sodium", 0.002)],
    "Water": [("oxygen", 0.17), ("hydrogen", 0.17), ("carbon", 0.05), ("nitrogen", 0.02),
              ("sodium", 0.01), ("mercury", 0.004), ("sulfur", 0.003)],
}

LANGS = {
    "Algeria": [("french", 0.47), ("arabic", 0.4), ("spanish", 0.04), ("english", 0.03),
                ("algerian", 0.007), ("italian", 0.005), ("latin", 0.003)],
    "Bolivia": [("spanish", 0.9), ("english", 0.07), ("portuguese", 0.01), ("french", 0.006),
                ("arabic", 0.003), ("italian", 0.002), ("latin", 0.001)],
    "Ethiopia": [("somali", 0.52), ("arabic", 0.08), ("english", 0.05), ("ethiopian", 0.04),
                 ("italian", 0.02), ("spanish", 0.01), ("french", 0.01)],
    "South Africa": [("english", 0.9), ("dutch", 0.03), ("french", 0.03), ("portuguese", 0.02),
                     ("spanish", 0.01), ("german", 0.006), ("arabic", 0.004)],
    "Singapore": [("english", 0.7), ("malay", 0.18), ("chinese", 0.03), ("tamil", 0.03),
                  ("mandarin", 0.02), ("indonesian", 0.005), ("arabic", 0.003)],
}

# complete ground-truth object sets for the demo subjects
TRUTHS = {
    "country_borders": {
        "Germany": ["Denmark", "Poland", "Czech Republic", "Austria", "Switzerland",
                    "France", "Luxembourg", "Belgium", "Netherlands"],
        "India": ["Pakistan", "China", "Nepal", "Bhutan", "Bangladesh", "Myanmar",
                  "Afghanistan", "Sri Lanka"],
        "Palau": ["Indonesia", "Philippines", "Micronesia"],
        "Malta": ["Italy"],
        "Singapore": ["Malaysia", "Indonesia"],
    },
    "compound_has_parts": {
        "Calcium Carbonate": ["Carbon", "Oxygen", "Calcium"],
        "Dopamine": ["Hydrogen", "Nitrogen", "Carbon", "Oxygen"],
        "Sodium Chloride": ["Sodium", "Chlorine"],
        "Thiocyanic Acid": ["Hydrogen", "Carbon", "Nitrogen", "Sulfur"],
        "Water": ["Oxygen", "Hydrogen"],
    },
    "country_official_lang": {
        "Algeria": ["Arabic", "Algerian"],
        "Bolivia": ["Spanish", "Quechua", "Aymara", "Guarani"],
        "Ethiopia": ["Amharic"],
        "South Africa": ["Afrikaans", "English", "Ndebele", "Xhosa", "Zulu", "Sepedi",
                         "Sesotho", "Setswana", "Siswati", "Tshivenda", "Xitsonga"],
        "Singapore": ["English", "Malay", "Tamil", "Mandarin"],
    },
}

# dataset file order fixes the 3/1/1 split: first three train, then dev, test
SUBJECT_ORDER = {
    "country_borders": ["Germany", "India", "Palau", "Malta", "Singapore"],
    "compound_has_parts": ["Calcium Carbonate", "Dopamine", "Sodium Chloride",
                           "Thiocyanic Acid", "Water"],
    "country_official_lang": ["Algeria", "Bolivia", "Ethiopia", "South Africa", "Singapore"],
}

FILL_PROMPTS = {
    "country_borders": ("{X} and [MASK] share a border.", BORDERS),
    "compound_has_parts": ("{X} has [MASK], which is an atom.", PARTS),
    "country_official_lang": ("[MASK] is the main language of {X}.", LANGS),
}

# secondary fill template for the language relation: same lists with the two
# middle ranks swapped and junk tokens added, exercising post-processing
SECOND_LANG_PROMPT = "People of {X} mostly speak in [MASK]."

# count-probe fixtures: per relation, per subject, the ranked fillers for the
# alphabetic and numeric templates
COUNT_PROMPTS = {
    "country_borders": ("{X} shares border with [MASK] countries.",
                        "{X} shares border with [MASK] countries"),
    "compound_has_parts": ("{X} consists of [MASK] elements.",
                           "{X} consists of [MASK] elements"),
    "country_official_lang": ("{X} has [MASK] official languages.",
                              "{X} has [MASK] official languages"),
}

COUNT_FILLERS = {
    "country_borders": {
        "Germany": (["nine", "many", "several"], ["many", "9", "7"]),
        "India": (["many", "some", "border"], ["8", "7", "10"]),
        "Palau": (["three", "few", "two"], ["30", "3", "2"]),
        "Malta": (["island", "sea", "many"], ["sea", "many", "few"]),
        "Singapore": (["two", "many", "three"], ["2", "10", "3"]),
    },
    "compound_has_parts": {
        "Calcium Carbonate": (["three", "many", "two"], ["many", "3", "4"]),
        "Dopamine": (["many", "several", "few"], ["4", "3", "5"]),
        "Sodium Chloride": (["two", "many", "three"], ["many", "2", "3"]),
        "Thiocyanic Acid": (["many", "few", "several"], ["13", "4", "3"]),
        "Water": (["two", "many", "three"], ["many", "3", "2"]),
    },
    "country_official_lang": {
        "Algeria": (["two", "many", "one"], ["many", "2", "3"]),
        "Bolivia": (["many", "several", "few"], ["37", "4", "2"]),
        "Ethiopia": (["one", "many", "two"], ["many", "1", "2"]),
        "South Africa": (["eleven", "many", "two"], ["many", "11", "2"]),
        "Singapore": (["four", "many", "two"], ["many", "4", "2"]),
    },
}

VERIFY_PROMPTS = {
    "country_borders": "{X} and {Y} share a border. Is this correct? Answer: [MASK].",
    "compound_has_parts": "{X} consists of {Y} atom. Is this correct? Answer: [MASK].",
    "country_official_lang": "{Y} is the official language of {X}. Is this correct? Answer: [MASK].",
}

# p_yes - p_no landscapes per relation: ground-truth candidates separate from
# the rest at a relation-specific gap, mid-interval w.r.t. the 0.01 alpha grid
VERIFY_GAPS = {
    "country_borders": (0.195, -0.055),
    "compound_has_parts": (0.145, -0.105),
    "country_official_lang": (0.245, -0.005),
}


def norm(token: str) -> str:
    return " ".join(token.lower().split())


def jsonl(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
    print(f"wrote {path} ({len(records)} lines)")


def entries(pairs):
    return [{"token": t, "prob": p} for t, p in pairs]


def second_language_lists() -> dict[str, list[tuple[str, float]]]:
    """Deterministic variant lists for the second language template: ranks 0
    and 2 trade tokens, so this prompt keeps a similar ranking ceiling while
    losing its top-1 accuracy."""
    out = {}
    for subject, pairs in LANGS.items():
        swapped = list(pairs)
        swapped[0], swapped[2] = (swapped[2][0], swapped[0][1]), (swapped[0][0], swapped[2][1])
        # junk appended below the last real probability: exercises stopword
        # and type filtering without disturbing the ranked prefix
        junk = [("the", 0.0008), ("speak", 0.0006), (swapped[0][0], 0.0004)]
        out[subject] = swapped + junk
    return out


def build_fill() -> list[dict]:
    records = []
    for relation, (prompt_tpl, lists) in FILL_PROMPTS.items():
        for subject in SUBJECT_ORDER[relation]:
            prompt = prompt_tpl.replace("{X}", subject)
            records.append({"prompt": prompt, "entries": entries(lists[subject])})
    for subject, pairs in second_language_lists().items():
        prompt = SECOND_LANG_PROMPT.replace("{X}", subject)
        records.append({"prompt": prompt, "entries": entries(pairs)})
    return records


def build_counts() -> list[dict]:
    records = []
    for relation, (alpha_tpl, num_tpl) in COUNT_PROMPTS.items():
        for subject in SUBJECT_ORDER[relation]:
            alpha_tokens, num_tokens = COUNT_FILLERS[relation][subject]
            for tpl, tokens in ((alpha_tpl, alpha_tokens), (num_tpl, num_tokens)):
                prompt = tpl.replace("{X}", subject)
                pairs = [(t, round(0.4 - 0.1 * i, 4)) for i, t in enumerate(tokens)]
                records.append({"prompt": prompt, "entries": entries(pairs)})
    return records


def build_verify() -> list[dict]:
    records = []
    for relation, (prompt_tpl, lists) in FILL_PROMPTS.items():
        good_diff, bad_diff = VERIFY_GAPS[relation]
        verify_tpl = VERIFY_PROMPTS[relation]
        for subject in SUBJECT_ORDER[relation]:
            truth = {norm(o) for o in TRUTHS[relation][subject]}
            for token, _prob in lists[subject]:
                diff = good_diff if token in truth else bad_diff
                p_yes = round(0.4 + diff / 2, 4)
                p_no = round(0.4 - diff / 2, 4)
                prompt = verify_tpl.replace("{X}", subject).replace("{Y}", token)
                pairs = sorted(
                    [("yes", p_yes), ("no", p_no), ("maybe", 0.01)], key=lambda e: -e[1]
                )
                records.append({"prompt": prompt, "entries": entries(pairs)})
    return records


def build_hits() -> list[dict]:
    """Hit counts: nonzero for ground-truth members plus one popular wrong
    object per relation, so subset is not a perfect filter."""
    noisy = {"country_borders": "thailand", "compound_has_parts": "carbon",
             "country_official_lang": "french"}
    records = []
    for relation, (_tpl, lists) in FILL_PROMPTS.items():
        verify_tpl = VERIFY_PROMPTS[relation]
        for subject in SUBJECT_ORDER[relation]:
            truth = {norm(o) for o in TRUTHS[relation][subject]}
            for i, (token, _prob) in enumerate(lists[subject]):
                if token in truth:
                    hits = 1200 - 100 * i
                elif token == noisy[relation]:
                    hits = 40
                else:
                    hits = 0
                query = verify_tpl.replace("{X}", subject).replace("{Y}", token)
                query = query.split(". Is this correct")[0]
                records.append({
                    "relation_id": relation,
                    "subject": norm(subject),
                    "object": token,
                    "query_text": query,
                    "hits": hits,
                })
    return records


def build_dataset() -> list[dict]:
    records = []
    for relation in sorted(SUBJECT_ORDER):
        for subject in SUBJECT_ORDER[relation]:
            records.append({
                "relation": relation,
                "subject": subject,
                "objects": TRUTHS[relation][subject],
            })
    return records


def main() -> None:
    jsonl(DEMO / "dataset.jsonl", build_dataset())
    jsonl(DEMO / "fixtures" / "fill.jsonl", build_fill())
    jsonl(DEMO / "fixtures" / "counts.jsonl", build_counts())
    jsonl(DEMO / "fixtures" / "verify.jsonl", build_verify())
    # hit counts are not scorer fixtures; they live outside the fixtures dir
    jsonl(DEMO / "hits.jsonl", build_hits())


if __name__ == "__main__":
    main()
