"""Bit-compatibility of the service with the pipeline's scorer wire format,
exercised over a real uvicorn server with the tiny offline checkpoint. The
extraction pipeline is driven purely through its external surfaces: the CLI
and the HTTP protocol."""

import json
import subprocess
import sys

import httpx
import pytest

from conftest import free_port, start_server, write_run_tree

PROMPT = "The official language of France is [MASK]."


@pytest.fixture(scope="module")
def server_url(tiny_checkpoint):
    port = free_port()
    start_server(str(tiny_checkpoint), port)
    return f"http://127.0.0.1:{port}"


def test_raw_protocol_round_trip(server_url):
    response = httpx.post(
        f"{server_url}/fill-mask",
        json={"model": "masklm", "prompt": PROMPT, "top_n": 10},
        timeout=30,
    )
    assert response.status_code == 200
    body = response.json()
    assert set(body) == {"model", "entries"}
    assert len(body["entries"]) == 10
    assert set(body["entries"][0]) == {"token", "prob"}


def test_restrict_tokens_over_the_wire(server_url):
    response = httpx.post(
        f"{server_url}/fill-mask",
        json={"model": "masklm", "prompt": PROMPT, "top_n": 2,
              "restrict_tokens": ["yes", "no"]},
        timeout=30,
    )
    tokens = {e["token"] for e in response.json()["entries"]}
    assert tokens == {"yes", "no"}


def test_pipeline_generate_and_evaluate_through_the_service(server_url, tmp_path):
    """The pipeline CLI, pointed at the service, completes an end-to-end
    ranking run: candidates generated, post-processed, cached and scored.
    The tiny model knows nothing, so only structural facts are asserted."""
    config_path = write_run_tree(tmp_path)
    out_dir = tmp_path / "out"

    def cli(*args):
        return subprocess.run(
            [sys.executable, "-m", "slotfill.cli", "-c", config_path,
             "--out", str(out_dir), "--scorer-url", server_url, *args],
            capture_output=True, text=True, timeout=300,
        )

    generate = cli("generate")
    assert generate.returncode == 0, generate.stderr
    evaluate = cli("evaluate", "--mechanism", "none", "--split", "test")
    assert evaluate.returncode == 0, evaluate.stderr

    candidates_file = out_dir / "candidates" / "country_official_lang__official-language.jsonl"
    records = [json.loads(line) for line in candidates_file.read_text().splitlines()]
    assert len(records) == 10
    for record in records:
        probs = [e["prob"] for e in record["entries"]]
        assert all(p1 >= p2 for p1, p2 in zip(probs, probs[1:]))
        assert all(0.0 <= p <= 1.0 for p in probs)
        assert len(record["entries"]) > 0  # the language tokens survive filtering

    payload = json.loads((out_dir / "eval" / "test.json").read_text())
    assert payload["stats"]["tuples"] == 10

    # verify probes travelled through restrict_tokens: the cache records them
    cache_lines = (out_dir / "cache.jsonl").read_text().splitlines()
    restricted = [json.loads(line) for line in cache_lines
                  if json.loads(line)["request"]["restrict"]]
    assert restricted, "no restrict_tokens requests were cached"
    assert all(r["request"]["restrict"] == ["yes", "no"] for r in restricted)
