"""HTTP service implementing the embedding wire protocol.

POST /embed takes {model?, texts} and returns {vectors, dims, model,
truncated}; every vector is L2-normalized and repeated identical requests
return identical vectors. GET /health reports readiness. One model
instance serves the process; inference runs strictly one chunk at a time
while the HTTP layer stays free to accept connections.
"""

from __future__ import annotations

import json
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .backends import EncoderBackend, load_backend
from .batching import batch_schedule
from .types import ModelSpec

DEFAULT_BATCH_SIZE = 16
DEFAULT_MAX_REQUEST_TEXTS = 1024


def build_app(
    spec: ModelSpec,
    backend: EncoderBackend | None = None,
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_request_texts: int = DEFAULT_MAX_REQUEST_TEXTS,
) -> FastAPI:
    """Assemble the service around one encoder instance.

    Loading the backend happens here, before any socket is bound, so a
    broken model surfaces as an exception rather than a half-up server.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if max_request_texts < 1:
        raise ValueError(f"max_request_texts must be >= 1, got {max_request_texts}")
    encoder = backend if backend is not None else load_backend(spec)
    inference_lock = threading.Lock()
    app = FastAPI(title="embedserver", docs_url=None, redoc_url=None, openapi_url=None)

    def encode_serialized(texts: list[str]) -> tuple[list[list[float]], list[bool]]:
        vectors: list[list[float]] = []
        truncated: list[bool] = []
        with inference_lock:
            for chunk in batch_schedule(texts, batch_size):
                chunk_vectors, chunk_truncated = encoder.encode(chunk)
                vectors.extend(chunk_vectors)
                truncated.extend(chunk_truncated)
        return vectors, truncated

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "model": spec.model_name}

    @app.post("/embed")
    async def embed(request: Request):
        try:
            body = json.loads(await request.body())
        except (ValueError, UnicodeDecodeError):
            return _error(400, "request body is not valid JSON")
        problem = _validate(body)
        if problem:
            return _error(400, problem)
        texts = body["texts"]
        if len(texts) > max_request_texts:
            return _error(413, f"batch of {len(texts)} texts exceeds the {max_request_texts}-text limit")
        if "model" in body and body["model"] != spec.model_name:
            return _error(400, f"unknown model {body['model']!r}; this server hosts {spec.model_name!r}")
        vectors, truncated = await run_in_threadpool(encode_serialized, texts)
        return {
            "vectors": vectors,
            "dims": spec.dims,
            "model": spec.model_name,
            "truncated": truncated,
        }

    return app


def serve(
    spec: ModelSpec,
    port: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_request_texts: int = DEFAULT_MAX_REQUEST_TEXTS,
    host: str = "127.0.0.1",
) -> None:
    """Load the model and block serving until interrupted.

    Raises BackendLoadError before binding when the model cannot load.
    """
    import uvicorn

    app = build_app(spec, batch_size=batch_size, max_request_texts=max_request_texts)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def _validate(body: object) -> str | None:
    if not isinstance(body, dict):
        return "request body must be a JSON object"
    if "texts" not in body:
        return "request lacks the texts field"
    texts = body["texts"]
    if not isinstance(texts, list) or any(not isinstance(t, str) for t in texts):
        return "texts must be a list of strings"
    if "model" in body and not isinstance(body["model"], str):
        return "model must be a string"
    return None


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)
