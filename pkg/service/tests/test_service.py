import pytest
from fastapi.testclient import TestClient

from masklm_service.app import create_app
from masklm_service.config import ServiceConfig, ServiceConfigError

from conftest import TINY_VOCAB

PROMPT = "The official language of France is [MASK]."


@pytest.fixture(scope="module")
def client(tiny_checkpoint):
    config = ServiceConfig(model=str(tiny_checkpoint), max_top_n=500)
    with TestClient(create_app(config)) as test_client:
        yield test_client


def fill(client, **payload):
    payload.setdefault("model", "tiny")
    return client.post("/fill-mask", json=payload)


class TestContract:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json()["vocab_size"] == len(TINY_VOCAB)

    def test_entries_sorted_and_bounded(self, client):
        response = fill(client, prompt=PROMPT, top_n=500)
        assert response.status_code == 200
        entries = response.json()["entries"]
        assert 0 < len(entries) <= 500
        probs = [e["prob"] for e in entries]
        assert all(0.0 <= p <= 1.0 for p in probs)
        assert all(p1 >= p2 for p1, p2 in zip(probs, probs[1:]))

    def test_top_n_truncates(self, client):
        response = fill(client, prompt=PROMPT, top_n=3)
        assert len(response.json()["entries"]) == 3

    def test_restrict_tokens_two_entry_response(self, client):
        response = fill(client, prompt=PROMPT, restrict_tokens=["yes", "no"])
        assert response.status_code == 200
        entries = response.json()["entries"]
        assert {e["token"] for e in entries} == {"yes", "no"}
        assert len(entries) == 2

    def test_restrict_token_outside_vocabulary_gets_zero(self, client):
        response = fill(client, prompt=PROMPT, restrict_tokens=["yes", "zzzunknown"])
        probs = {e["token"]: e["prob"] for e in response.json()["entries"]}
        assert probs["zzzunknown"] == 0.0
        assert probs["yes"] > 0.0

    def test_identical_requests_identical_responses(self, client):
        first = fill(client, prompt=PROMPT, top_n=25).json()
        second = fill(client, prompt=PROMPT, top_n=25).json()
        assert first == second

    def test_probability_mass_is_a_distribution(self, client):
        entries = fill(client, prompt=PROMPT, top_n=500).json()["entries"]
        assert sum(e["prob"] for e in entries) == pytest.approx(1.0, abs=1e-4)


class TestErrors:
    def test_malformed_json_is_400(self, client):
        response = client.post(
            "/fill-mask", content=b"{not json", headers={"Content-Type": "application/json"}
        )
        assert response.status_code == 400

    def test_non_object_body_is_400(self, client):
        response = client.post("/fill-mask", json=[1, 2, 3])
        assert response.status_code == 400

    def test_missing_prompt_is_422(self, client):
        response = fill(client, top_n=5)
        assert response.status_code == 422

    def test_prompt_without_mask_is_422(self, client):
        response = fill(client, prompt="The official language of France is French.")
        assert response.status_code == 422

    def test_prompt_with_two_masks_is_422(self, client):
        response = fill(client, prompt="[MASK] is [MASK].")
        assert response.status_code == 422

    def test_top_n_above_cap_is_422(self, client):
        response = fill(client, prompt=PROMPT, top_n=501)
        assert response.status_code == 422

    def test_empty_restrict_tokens_is_422(self, client):
        response = fill(client, prompt=PROMPT, restrict_tokens=[])
        assert response.status_code == 422

    def test_unloadable_model_is_503(self, tmp_path):
        config = ServiceConfig(model=str(tmp_path / "nonexistent-model"), max_top_n=500)
        with TestClient(create_app(config)) as broken:
            response = broken.post("/fill-mask", json={"prompt": PROMPT, "top_n": 5})
            assert response.status_code == 503
            assert broken.get("/healthz").status_code == 503


class TestConfig:
    def test_top_n_budget_floor(self):
        with pytest.raises(ServiceConfigError, match="at least 500"):
            ServiceConfig(model="m", max_top_n=100)

    def test_bad_port(self):
        with pytest.raises(ServiceConfigError, match="port"):
            ServiceConfig(model="m", port=0)
