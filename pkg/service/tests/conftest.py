import json
import socket
import threading
import time

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.normalizers import BertNormalizer
from tokenizers.pre_tokenizers import BertPreTokenizer
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertForMaskedLM, PreTrainedTokenizerFast

TINY_VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "of", "language", "official", "is", "and", "a", "in", ".", "?",
    "france", "germany", "spain", "italy", "singapore",
    "french", "german", "spanish", "italian", "english", "malay",
    "yes", "no", "maybe", "people", "speak", "mostly", "share", "border",
    "answer", "correct", "this", "main", "two", "three", "13",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A saved-to-disk masked LM with a 40-token vocabulary and seeded
    random weights; loads through the same AutoModel path as a real
    checkpoint, no network involved."""
    directory = tmp_path_factory.mktemp("tiny-masklm")
    vocab_map = {token: i for i, token in enumerate(TINY_VOCAB)}
    tokenizer_core = Tokenizer(WordPiece(vocab_map, unk_token="[UNK]"))
    tokenizer_core.normalizer = BertNormalizer(lowercase=True)
    tokenizer_core.pre_tokenizer = BertPreTokenizer()
    tokenizer_core.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab_map["[CLS]"]), ("[SEP]", vocab_map["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=tokenizer_core,
        unk_token="[UNK]", pad_token="[PAD]", cls_token="[CLS]",
        sep_token="[SEP]", mask_token="[MASK]",
    )
    tokenizer.save_pretrained(directory)

    torch.manual_seed(20240817)
    config = BertConfig(
        vocab_size=len(TINY_VOCAB), hidden_size=32, num_hidden_layers=2,
        num_attention_heads=2, intermediate_size=64, max_position_embeddings=64,
    )
    BertForMaskedLM(config).save_pretrained(directory)
    return directory


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def start_server(model: str, port: int) -> threading.Thread:
    """Run the service under uvicorn in a daemon thread; waits until healthy."""
    import httpx
    import uvicorn

    from masklm_service.app import create_app
    from masklm_service.config import ServiceConfig

    app = create_app(ServiceConfig(model=model, max_top_n=500, port=port))
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 120
    url = f"http://127.0.0.1:{port}/healthz"
    while time.time() < deadline:
        try:
            if httpx.get(url, timeout=5).status_code == 200:
                return thread
        except httpx.HTTPError:
            pass
        time.sleep(0.3)
    raise RuntimeError("service did not become healthy in time")


COUNTRY_LANGS = {
    "France": "french", "Germany": "german", "Spain": "spanish", "Italy": "italian",
    "Portugal": "portuguese", "Russia": "russian", "Japan": "japanese",
    "Poland": "polish", "Sweden": "swedish", "Netherlands": "dutch",
}

DISTRACTOR_LANGS = ["english", "arabic", "latin", "chinese", "mandarin", "malay", "hindi"]


def write_run_tree(root, extra_langs=()) -> str:
    """A minimal official-language run config for end-to-end runs over HTTP.

    Returns the config path. All ten subjects land in the test split so that
    a ranking-only evaluation sees every tuple.
    """
    (root / "vocab").mkdir(parents=True)
    languages = sorted(set(COUNTRY_LANGS.values()) | set(DISTRACTOR_LANGS) | set(extra_langs))
    (root / "vocab" / "languages.txt").write_text("\n".join(languages) + "\n")

    (root / "relations").mkdir()
    (root / "relations" / "official_lang.yaml").write_text(
        "\n".join([
            "relation: country_official_lang",
            "subject_type: country",
            "object_type_labels: [language]",
            "type_vocabulary: ../vocab/languages.txt",
            "fill_templates:",
            "  - id: official-language",
            '    text: "The official language of [X] is [MASK]."',
            "verify_template:",
            "  id: verify-lang",
            '  text: "[Y] is the official language of [X]. Is this correct? Answer: [MASK]."',
        ]) + "\n"
    )

    with (root / "dataset.jsonl").open("w") as handle:
        for country, lang in COUNTRY_LANGS.items():
            handle.write(json.dumps(
                {"relation": "country_official_lang", "subject": country, "objects": [lang]}
            ) + "\n")

    (root / "config.yaml").write_text(
        "\n".join([
            "dataset: dataset.jsonl",
            "split_sizes: [0, 0, 10]",
            "relations: [relations/official_lang.yaml]",
            "out_dir: out",
            "scorer:",
            "  mode: http",
            "  model: masklm",
            "  top_n: 100",
            "jobs: 1",
            "seed: 0",
        ]) + "\n"
    )
    return str(root / "config.yaml")
