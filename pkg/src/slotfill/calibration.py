"""Web-signal calibration: adjust a candidate list by external hit counts.

Two rules over per-object query hit counts:

* subset — keep only objects with a non-zero count, order and probabilities
  untouched;
* rerank — promote non-zero-count objects to the front at the list's maximum
  probability, keeping their relative order, with zero-count objects
  following unchanged. The ordering is the contract; the flattened
  probability is a side effect of the promotion and can push the list's
  probability sum past 1.

Hit counts come through a pluggable client: the default reads a JSONL
fixture file; an optional HTTP client exists for live lookups behind a rate
limit and the shared scorer cache format.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol

import requests

from .model import MASK, CandidateList, PromptTemplate, SlotfillError

log = logging.getLogger(__name__)

HITS_API_KEY_ENV = "SLOTFILL_HITS_API_KEY"


class HitCountError(SlotfillError):
    pass


@dataclass(frozen=True, slots=True)
class HitCountRecord:
    relation_id: str
    subject: str
    object: str
    query_text: str
    hits: int

    def __post_init__(self) -> None:
        if self.hits < 0:
            raise HitCountError(f"negative hit count for {self.query_text!r}")


def query_text(verify_template: PromptTemplate, subject: str, obj: str) -> str:
    """Natural-language query for one triple, derived from the verify template.

    The mask and the trailing question/answer clauses are stripped:
    "[X] and [Y] share a border. Is this correct? Answer: [MASK]." becomes
    "Italy and France share a border".
    """
    text = verify_template.text.replace("[X]", subject).replace("[Y]", obj)
    cut = text.find("Is this correct")
    if cut != -1:
        text = text[:cut]
    cut = text.find("Answer:")
    if cut != -1:
        text = text[:cut]
    text = text.replace(MASK, "")
    return text.strip().rstrip(".?! ").strip()


def _coverage(clist: CandidateList, hits: Mapping[str, int]) -> dict[str, int]:
    covered = {}
    for token in clist.tokens:
        if token not in hits:
            log.warning(
                "no hit count for (%s, %s, %s); treating as 0",
                clist.relation_id, clist.subject_label, token,
            )
        covered[token] = hits.get(token, 0)
    return covered


def calibrate_subset(clist: CandidateList, hits: Mapping[str, int]) -> CandidateList:
    covered = _coverage(clist, hits)
    kept = tuple((t, p) for t, p in clist.entries if covered[t] > 0)
    return CandidateList(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        template_id=clist.template_id,
        entries=kept,
    )


def calibrate_rerank(clist: CandidateList, hits: Mapping[str, int]) -> CandidateList:
    if not clist.entries:
        return clist
    covered = _coverage(clist, hits)
    max_prob = clist.entries[0][1]
    promoted = tuple((t, max_prob) for t, p in clist.entries if covered[t] > 0)
    rest = tuple((t, p) for t, p in clist.entries if covered[t] == 0)
    return CandidateList(
        relation_id=clist.relation_id,
        subject_label=clist.subject_label,
        template_id=clist.template_id,
        entries=promoted + rest,
    )


class HitCounts(Protocol):
    def hits_for(self, relation_id: str, subject: str, objects: Iterable[str]) -> dict[str, int]: ...


class FileHitCounts:
    """Hit counts from a JSONL file of HitCountRecord objects."""

    def __init__(self, path: str | Path):
        self._by_key: dict[tuple[str, str, str], int] = {}
        path = Path(path)
        if not path.exists():
            raise HitCountError(f"hit-count file not found: {path}")
        with path.open(encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                raw = json.loads(line)
                try:
                    record = HitCountRecord(
                        relation_id=raw["relation_id"],
                        subject=raw["subject"],
                        object=raw["object"],
                        query_text=raw["query_text"],
                        hits=int(raw["hits"]),
                    )
                except KeyError as exc:
                    raise HitCountError(f"line {lineno}: missing field {exc}") from exc
                self._by_key[(record.relation_id, record.subject, record.object)] = record.hits

    def hits_for(self, relation_id: str, subject: str, objects: Iterable[str]) -> dict[str, int]:
        return {
            obj: self._by_key.get((relation_id, subject, obj), 0) for obj in objects
        }


class HTTPHitCounts:
    """Live hit-count lookups: POST {url} with {"query": text} -> {"hits": n}.

    Honors a requests-per-second cap and appends results to a JSONL cache so
    repeat runs stay offline. The API key travels in the Authorization header
    and is read from the environment, never from config files.
    """

    def __init__(
        self,
        url: str,
        verify_template: PromptTemplate,
        *,
        rps: float = 1.0,
        cache_path: str | Path | None = None,
        timeout: float = 30.0,
        session: requests.Session | None = None,
    ):
        self.url = url
        self.verify_template = verify_template
        self.min_interval = 1.0 / rps if rps > 0 else 0.0
        self.timeout = timeout
        self.cache_path = Path(cache_path) if cache_path else None
        self._session = session or requests.Session()
        self._lock = threading.Lock()
        self._last_call = 0.0
        self._cache: dict[str, int] = {}
        if self.cache_path and self.cache_path.exists():
            with self.cache_path.open(encoding="utf-8") as handle:
                for line in handle:
                    if line.strip():
                        record = json.loads(line)
                        self._cache[record["query_text"]] = int(record["hits"])

    def _fetch(self, query: str) -> int:
        with self._lock:
            wait = self._last_call + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_call = time.monotonic()
        headers = {}
        api_key = os.environ.get(HITS_API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        resp = self._session.post(
            self.url, json={"query": query}, headers=headers, timeout=self.timeout
        )
        resp.raise_for_status()
        return int(resp.json()["hits"])

    def hits_for(self, relation_id: str, subject: str, objects: Iterable[str]) -> dict[str, int]:
        results: dict[str, int] = {}
        for obj in objects:
            query = query_text(self.verify_template, subject, obj)
            if query in self._cache:
                results[obj] = self._cache[query]
                continue
            hits = self._fetch(query)
            self._cache[query] = hits
            results[obj] = hits
            if self.cache_path:
                record = {
                    "relation_id": relation_id,
                    "subject": subject,
                    "object": obj,
                    "query_text": query,
                    "hits": hits,
                }
                with self._lock:
                    self.cache_path.parent.mkdir(parents=True, exist_ok=True)
                    with self.cache_path.open("a", encoding="utf-8") as handle:
                        handle.write(json.dumps(record, sort_keys=True) + "\n")
        return results
