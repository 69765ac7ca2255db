"""HTTP clients for the embedding and completion wire protocols.

Embedding protocol: POST {endpoint}/embed with {model, texts} returning
{vectors, dims, model}. Completion protocol: POST {endpoint}/complete with
{prompt, max_tokens, temperature, stop} returning {text, usage}. Failed
calls retry with exponential backoff before surfacing a ProviderError.

A bearer token is read from RAGADAPT_PROVIDER_TOKEN when set.
"""

from __future__ import annotations

import logging
import math
import os
import time

import requests

from ..retrieval.types import EmbeddingVector
from .types import (
    CompletionProviderConfig,
    CompletionRequest,
    CompletionResponse,
    EmbeddingProviderConfig,
    ProviderError,
)

log = logging.getLogger(__name__)

TOKEN_ENV_VAR = "RAGADAPT_PROVIDER_TOKEN"
_BACKOFF_START_S = 0.1


def _auth_headers() -> dict[str, str]:
    token = os.environ.get(TOKEN_ENV_VAR)
    return {"Authorization": f"Bearer {token}"} if token else {}


class _Retryable(Exception):
    pass


def _post_with_retries(url: str, payload: dict, timeout_ms: int, retries: int) -> dict:
    delay = _BACKOFF_START_S
    last_error: Exception | None = None
    for attempt in range(max(retries, 1)):
        try:
            return _post_once(url, payload, timeout_ms)
        except _Retryable as exc:
            last_error = exc
        if attempt + 1 < max(retries, 1):
            time.sleep(delay)
            delay *= 2
    raise ProviderError(f"{url} failed after {retries} attempts: {last_error}")


def _post_once(url: str, payload: dict, timeout_ms: int) -> dict:
    try:
        resp = requests.post(url, json=payload, timeout=timeout_ms / 1000.0, headers=_auth_headers())
    except (requests.ConnectionError, requests.Timeout) as exc:
        raise _Retryable(str(exc)) from exc
    if resp.status_code >= 500:
        raise _Retryable(f"{url} returned {resp.status_code}: {resp.text[:200]}")
    if resp.status_code != 200:
        # client errors are final; surface the payload verbatim
        raise ProviderError(f"{url} returned {resp.status_code}: {resp.text[:500]}")
    try:
        return resp.json()
    except ValueError as exc:
        raise _Retryable(f"non-JSON response from {url}") from exc


class HttpEmbeddingProvider:
    def __init__(self, config: EmbeddingProviderConfig) -> None:
        self.config = config
        self.dims = config.dims
        self.model_name = config.model_name

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        """One unit-norm vector per text, order-preserving."""
        vectors: list[EmbeddingVector] = []
        cfg = self.config
        for start in range(0, len(texts), cfg.batch_size):
            chunk = texts[start : start + cfg.batch_size]
            try:
                body = _post_with_retries(
                    f"{cfg.endpoint.rstrip('/')}/embed",
                    {"model": cfg.model_name, "texts": chunk},
                    cfg.timeout_ms,
                    cfg.retries,
                )
            except ProviderError as exc:
                raise ProviderError(
                    f"embedding batch failed: {exc}",
                    batch_indices=tuple(range(start, start + len(chunk))),
                ) from exc
            if body.get("dims") != cfg.dims:
                raise ProviderError(
                    f"provider returned dims {body.get('dims')}, expected {cfg.dims}",
                    batch_indices=tuple(range(start, start + len(chunk))),
                )
            raw = body["vectors"]
            if len(raw) != len(chunk):
                raise ProviderError(
                    f"provider returned {len(raw)} vectors for {len(chunk)} texts",
                    batch_indices=tuple(range(start, start + len(chunk))),
                )
            vectors.extend(_normalize(values, cfg.dims) for values in raw)
        return vectors


class HttpCompletionProvider:
    def __init__(self, config: CompletionProviderConfig) -> None:
        self.config = config

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        started = time.perf_counter()
        body = _post_with_retries(
            f"{self.config.endpoint.rstrip('/')}/complete",
            {
                "prompt": request.prompt,
                "max_tokens": request.max_tokens,
                "temperature": request.temperature,
                "stop": list(request.stop) if request.stop else None,
            },
            self.config.timeout_ms,
            self.config.retries,
        )
        latency_ms = (time.perf_counter() - started) * 1000.0
        usage = body.get("usage", {})
        return CompletionResponse(
            text=body["text"],
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency_ms=latency_ms,
        )


def _normalize(values: list[float], dims: int) -> EmbeddingVector:
    if len(values) != dims:
        raise ProviderError(f"vector has {len(values)} components, expected {dims}")
    norm = math.sqrt(sum(v * v for v in values))
    if norm == 0.0:
        raise ProviderError("provider returned an all-zero vector")
    return EmbeddingVector(dims=dims, values=tuple(v / norm for v in values), unit_norm=True)
