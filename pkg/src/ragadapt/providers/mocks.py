"""Deterministic in-process providers for offline runs and tests.

The mock embedder is a seeded hashed bag-of-terms: every index term maps to
one coordinate, weights are term frequencies, and the vector is unit-norm.
Texts sharing no terms (and no hash collisions) are orthogonal, so retrieval
behavior is predictable from vocabulary overlap alone.

The mock completers model latency as a fixed cost per prompt token, which
makes measured throughput fall as prompts grow while staying deterministic.
"""

from __future__ import annotations

import hashlib
import math
from collections import defaultdict

from ..retrieval.lexical import tokenize_for_index
from ..retrieval.types import EmbeddingVector
from ..tokenizer import DEFAULT_TOKENIZER
from .types import CompletionRequest, CompletionResponse, ProviderError

SENTINEL_COMPLETION = "no_grounded_continuation();"
DEFAULT_MS_PER_PROMPT_TOKEN = 0.05


def mock_embed(text: str, dims: int = 256, seed: int = 0) -> EmbeddingVector:
    if dims < 8:
        raise ValueError(f"dims must be >= 8, got {dims}")
    terms = tokenize_for_index(text)
    if not terms:
        raise ValueError("cannot embed a text with no index terms (zero vector)")
    coords: dict[int, float] = defaultdict(float)
    for term in terms:
        coords[_term_coordinate(term, seed, dims)] += 1.0
    norm = math.sqrt(sum(w * w for w in coords.values()))
    values = [0.0] * dims
    for coord, weight in coords.items():
        values[coord] = weight / norm
    return EmbeddingVector(dims=dims, values=tuple(values), unit_norm=True)


def _term_coordinate(term: str, seed: int, dims: int) -> int:
    digest = hashlib.blake2b(f"{seed}:{term}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dims


class MockEmbeddingProvider:
    """In-process stand-in for HttpEmbeddingProvider."""

    def __init__(self, dims: int = 256, seed: int = 0, model_name: str = "mock-embed") -> None:
        if dims < 8:
            raise ValueError(f"dims must be >= 8, got {dims}")
        self.dims = dims
        self.seed = seed
        self.model_name = model_name

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        vectors = []
        for i, text in enumerate(texts):
            try:
                vectors.append(mock_embed(text, self.dims, self.seed))
            except ValueError as exc:
                raise ProviderError(str(exc), batch_indices=(i,)) from exc
        return vectors


class CopyOracleCompleter:
    """Emits the line that follows the query's last context lines wherever
    they reappear earlier in the prompt (i.e. inside a retrieved unit).

    With a retrieval hit whose unit contains the context and its
    continuation verbatim, the emitted line is exactly the ground truth;
    otherwise a fixed sentinel comes back. Matches closest to the query are
    preferred, so the most similar unit wins when several contain the tail.
    """

    def __init__(
        self,
        match_lines: int = 3,
        sentinel: str = SENTINEL_COMPLETION,
        ms_per_prompt_token: float = DEFAULT_MS_PER_PROMPT_TOKEN,
    ) -> None:
        if match_lines < 1:
            raise ValueError(f"match_lines must be >= 1, got {match_lines}")
        self.match_lines = match_lines
        self.sentinel = sentinel
        self.ms_per_prompt_token = ms_per_prompt_token

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        lines = request.prompt.split("\n")
        m = min(self.match_lines, len(lines))
        tail = lines[-m:]
        text = self.sentinel
        for i in range(len(lines) - m - 1, -1, -1):
            if lines[i : i + m] == tail and lines[i + m].strip():
                text = lines[i + m]
                break
        return _respond(text, request, self.ms_per_prompt_token)


class ConstantCompleter:
    """Fixed completion regardless of prompt."""

    def __init__(self, text: str = "return 0;", ms_per_prompt_token: float = DEFAULT_MS_PER_PROMPT_TOKEN) -> None:
        self.text = text
        self.ms_per_prompt_token = ms_per_prompt_token

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        return _respond(self.text, request, self.ms_per_prompt_token)


def _respond(text: str, request: CompletionRequest, ms_per_prompt_token: float) -> CompletionResponse:
    text = DEFAULT_TOKENIZER.clip(text, request.max_tokens)
    if request.stop:
        for marker in request.stop:
            cut = text.find(marker)
            if cut != -1:
                text = text[:cut]
    prompt_tokens = DEFAULT_TOKENIZER.count(request.prompt)
    return CompletionResponse(
        text=text,
        prompt_tokens=prompt_tokens,
        completion_tokens=DEFAULT_TOKENIZER.count(text),
        latency_ms=ms_per_prompt_token * prompt_tokens,
    )
