"""Scorer clients: ask a backend for ranked mask fillers.

Two implementations share one protocol: an HTTP client speaking the
``POST /fill-mask`` wire format, and a deterministic fixture scorer backed
by JSONL files for offline, reproducible runs. A caching wrapper persists
responses as human-inspectable JSON lines keyed by a content hash.

Probabilities are never renormalized after truncation: selection thresholds
are learned on raw softmax values, and renormalizing would shift them.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import requests

from .model import ContractError, SlotfillError
from .prompts import InstantiatedPrompt

DEFAULT_TOP_N = 500
SCORER_URL_ENV = "SLOTFILL_SCORER_URL"


class ScorerError(SlotfillError):
    pass


class FixtureMissError(ScorerError):
    pass


class TransportError(ScorerError):
    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


@dataclass(frozen=True, slots=True)
class ScorerRequest:
    prompt: InstantiatedPrompt
    top_n: int = DEFAULT_TOP_N
    restrict_tokens: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.top_n < 1:
            raise ContractError(f"top_n must be >= 1, got {self.top_n}")
        if self.restrict_tokens is not None and not self.restrict_tokens:
            raise ContractError("restrict_tokens, when present, must be non-empty")


@dataclass(frozen=True, slots=True)
class ScorerResponse:
    entries: tuple[tuple[str, float], ...]
    model_id: str

    def __post_init__(self) -> None:
        probs = [p for _, p in self.entries]
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ContractError("scorer response probability outside [0, 1]")
        if any(p2 > p1 for p1, p2 in zip(probs, probs[1:])):
            raise ContractError("scorer response entries not sorted non-increasing")


class Scorer(Protocol):
    model_id: str

    def fill_mask(self, request: ScorerRequest) -> ScorerResponse: ...


@dataclass(frozen=True, slots=True)
class TokenProbs:
    probs: dict[str, float]
    missing: tuple[str, ...]


def token_probs(scorer: Scorer, prompt: InstantiatedPrompt, tokens: list[str]) -> TokenProbs:
    """Probabilities of specific tokens from the full mask distribution.

    Tokens the scorer does not know come back with probability 0 and are
    listed in ``missing`` so callers can surface a warning.
    """
    if not tokens:
        raise ContractError("token_probs requires a non-empty token list")
    request = ScorerRequest(prompt=prompt, top_n=len(tokens), restrict_tokens=tuple(tokens))
    response = scorer.fill_mask(request)
    probs = {token: prob for token, prob in response.entries}
    for t in tokens:
        probs.setdefault(t, 0.0)
    # Exactly-zero probability marks a token the backend's vocabulary lacks;
    # a real softmax never produces 0.0 for a known token.
    missing = tuple(t for t in tokens if probs[t] == 0.0)
    return TokenProbs(probs=probs, missing=missing)


class FixtureScorer:
    """Serves canned distributions from JSONL fixture files.

    Each line is ``{"prompt": str, "entries": [{"token": str, "prob": float}]}``;
    all ``*.jsonl`` files under the fixture directory are loaded. Lookup is by
    exact prompt text. A missing prompt is a hard error, never a silent empty
    list.
    """

    def __init__(self, fixture_dir: str | Path, model_id: str = "fixture"):
        self.model_id = model_id
        self._responses: dict[str, tuple[tuple[str, float], ...]] = {}
        fixture_dir = Path(fixture_dir)
        if not fixture_dir.is_dir():
            raise ScorerError(f"fixture directory not found: {fixture_dir}")
        for path in sorted(fixture_dir.glob("*.jsonl")):
            with path.open(encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    entries = tuple((e["token"], float(e["prob"])) for e in record["entries"])
                    self._responses[record["prompt"]] = entries

    def __len__(self) -> int:
        return len(self._responses)

    def fill_mask(self, request: ScorerRequest) -> ScorerResponse:
        entries = self._responses.get(request.prompt.text)
        if entries is None:
            raise FixtureMissError(f"no fixture for prompt: {request.prompt.text!r}")
        if request.restrict_tokens is not None:
            full = dict(entries)
            picked = [(t, full.get(t, 0.0)) for t in request.restrict_tokens]
            picked.sort(key=lambda pair: -pair[1])
            return ScorerResponse(entries=tuple(picked), model_id=self.model_id)
        return ScorerResponse(entries=entries[: request.top_n], model_id=self.model_id)


class HTTPScorer:
    """Client for the ``POST /fill-mask`` protocol.

    Request JSON: ``{"model", "prompt", "top_n", "restrict_tokens"?}`` with the
    mask position spelled as the literal substring ``[MASK]``. Response JSON:
    ``{"model", "entries": [{"token", "prob"}]}``. Transient transport failures
    are retried with exponential backoff, then surfaced as TransportError.
    """

    def __init__(
        self,
        base_url: str | None = None,
        model_id: str = "default",
        *,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        base_url = base_url or os.environ.get(SCORER_URL_ENV)
        if not base_url:
            raise ScorerError(
                f"no scorer URL configured (flag/config or {SCORER_URL_ENV} environment variable)"
            )
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self._session = session or requests.Session()

    def fill_mask(self, request: ScorerRequest) -> ScorerResponse:
        payload: dict = {
            "model": self.model_id,
            "prompt": request.prompt.text,
            "top_n": request.top_n,
        }
        if request.restrict_tokens is not None:
            payload["restrict_tokens"] = list(request.restrict_tokens)
        last_error: Exception | None = None
        for attempt in range(self.retries):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                resp = self._session.post(
                    f"{self.base_url}/fill-mask", json=payload, timeout=self.timeout
                )
                resp.raise_for_status()
                body = resp.json()
                entries = tuple((e["token"], float(e["prob"])) for e in body["entries"])
                return ScorerResponse(entries=entries, model_id=body.get("model", self.model_id))
            except (requests.RequestException, KeyError, ValueError) as exc:
                last_error = exc
        raise TransportError(f"fill-mask request failed: {last_error}", attempts=self.retries)


def request_key(model_id: str, request: ScorerRequest) -> str:
    material = json.dumps(
        {
            "model": model_id,
            "prompt": request.prompt.text,
            "top_n": request.top_n,
            "restrict": list(request.restrict_tokens) if request.restrict_tokens else None,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


@dataclass
class CachingScorer:
    """On-disk response cache around any scorer.

    The cache file is JSON lines of ``{"key", "request", "response"}`` so it
    can be inspected and diffed by hand. With a warm cache, fill_mask returns
    byte-identical responses without touching the underlying scorer. Writes
    are serialized through a single lock; reads are lock-free after load.
    """

    inner: Scorer
    path: Path
    _cache: dict[str, ScorerResponse] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self) -> None:
        self.path = Path(self.path)
        self.model_id = self.inner.model_id
        if self.path.exists():
            with self.path.open(encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    entries = tuple(
                        (e["token"], float(e["prob"])) for e in record["response"]["entries"]
                    )
                    self._cache[record["key"]] = ScorerResponse(
                        entries=entries, model_id=record["response"]["model"]
                    )

    def fill_mask(self, request: ScorerRequest) -> ScorerResponse:
        key = request_key(self.inner.model_id, request)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        response = self.inner.fill_mask(request)
        record = {
            "key": key,
            "request": {
                "model": self.inner.model_id,
                "prompt": request.prompt.text,
                "top_n": request.top_n,
                "restrict": list(request.restrict_tokens) if request.restrict_tokens else None,
            },
            "response": {
                "model": response.model_id,
                "entries": [{"token": t, "prob": p} for t, p in response.entries],
            },
        }
        with self._lock:
            self._cache[key] = response
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
        return response
