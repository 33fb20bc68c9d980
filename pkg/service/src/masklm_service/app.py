"""HTTP surface: POST /fill-mask, wire-compatible with the extraction
pipeline's scorer client.

Request JSON: {"model": str, "prompt": str, "top_n": int,
"restrict_tokens": [str, ...]?} with the mask spelled "[MASK]".
Response JSON: {"model": str, "entries": [{"token": str, "prob": float}]}.

Error mapping: body that is not JSON -> 400; schema violations, a missing
or duplicated mask, or an oversized top_n -> 422; model load failure -> 503.
"""

from __future__ import annotations

import json
import logging
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, ValidationError

from .config import ServiceConfig
from .engine import MaskFiller, PromptError

log = logging.getLogger(__name__)


class FillMaskRequest(BaseModel):
    model: str = ""
    prompt: str
    top_n: int = Field(default=500, ge=1)
    restrict_tokens: list[str] | None = None


class LazyEngine:
    """Loads the model on first use; a load failure is remembered and
    surfaced as 503 on every request instead of crashing the process."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self._lock = threading.Lock()
        self._engine: MaskFiller | None = None
        self._error: Exception | None = None

    def get(self) -> MaskFiller:
        with self._lock:
            if self._engine is None and self._error is None:
                try:
                    self._engine = MaskFiller(self.config.model, self.config.device)
                except Exception as exc:  # load failures become 503s
                    self._error = exc
                    log.error("model load failed: %s", exc)
            if self._error is not None:
                raise self._error
            return self._engine


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="masklm-service")
    engine = LazyEngine(config)

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.get("/healthz")
    def healthz():
        try:
            filler = engine.get()
        except Exception as exc:
            return error(503, f"model unavailable: {exc}")
        return {"status": "ok", "model": filler.model_name, "vocab_size": filler.vocab_size}

    @app.post("/fill-mask")
    async def fill_mask(request: Request):
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            return error(400, "request body is not valid JSON")
        try:
            parsed = FillMaskRequest(**body) if isinstance(body, dict) else None
        except ValidationError as exc:
            return error(422, f"invalid request: {exc.errors()}")
        if parsed is None:
            return error(400, "request body must be a JSON object")
        if parsed.top_n > config.max_top_n:
            return error(422, f"top_n {parsed.top_n} exceeds the service cap {config.max_top_n}")
        if parsed.restrict_tokens is not None and not parsed.restrict_tokens:
            return error(422, "restrict_tokens, when present, must be non-empty")

        try:
            filler = engine.get()
        except Exception as exc:
            return error(503, f"model unavailable: {exc}")

        try:
            if parsed.restrict_tokens is not None:
                entries = filler.token_probs(parsed.prompt, parsed.restrict_tokens)
            else:
                entries = filler.top_fillers(parsed.prompt, parsed.top_n)
        except PromptError as exc:
            return error(422, str(exc))

        return {
            "model": filler.model_name,
            "entries": [{"token": token, "prob": prob} for token, prob in entries],
        }

    return app
