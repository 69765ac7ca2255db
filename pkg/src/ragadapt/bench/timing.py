"""Preparation-cost measurement: embedding and indexing phases.

The lexical and symbol backends report a zero embedding phase since they
never touch an embedding model; only the vector backend pays it.
"""

from __future__ import annotations

import time

from ..corpus.types import RetrievalUnit
from ..retrieval.lexical import build_lexical_index
from ..retrieval.symbols import build_symbol_index
from ..retrieval.vector import build_vector_index
from .stats import PreparationStats

BACKENDS = ("bm25", "vector", "symbol")


def build_timed(units: list[RetrievalUnit], backend: str, embedder=None) -> tuple[object, PreparationStats]:
    """Build the requested index, timing each preparation phase."""
    if backend == "bm25":
        started = time.perf_counter()
        index = build_lexical_index({u.id: u.content for u in units})
        return index, PreparationStats(
            durations_s={"embedding": 0.0, "indexing": time.perf_counter() - started}
        )
    if backend == "vector":
        if embedder is None:
            raise ValueError("vector backend requires an embedding provider")
        started = time.perf_counter()
        vectors = embedder.embed_batch([u.content for u in units])
        embedded = time.perf_counter()
        index = build_vector_index([(u.id, v) for u, v in zip(units, vectors)])
        return index, PreparationStats(
            durations_s={"embedding": embedded - started, "indexing": time.perf_counter() - embedded}
        )
    if backend == "symbol":
        started = time.perf_counter()
        index = build_symbol_index(units)
        return index, PreparationStats(
            durations_s={"embedding": 0.0, "indexing": time.perf_counter() - started}
        )
    raise ValueError(f"unknown backend {backend!r}, expected one of {BACKENDS}")


def measure_preparation(units: list[RetrievalUnit], backend: str, embedder=None) -> PreparationStats:
    _, stats = build_timed(units, backend, embedder)
    return stats
