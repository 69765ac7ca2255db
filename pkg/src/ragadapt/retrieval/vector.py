"""Exact cosine-similarity vector retrieval (brute-force scan)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .types import EmbeddingVector, RetrievalResult

log = logging.getLogger(__name__)


@dataclass
class VectorIndex:
    dims: int
    entries: list[tuple[int, EmbeddingVector]]


def build_vector_index(entries: list[tuple[int, EmbeddingVector]]) -> VectorIndex:
    if not entries:
        raise ValueError("cannot build a vector index from zero entries")
    dims = entries[0][1].dims
    seen: set[int] = set()
    for uid, vec in entries:
        if vec.dims != dims:
            raise ValueError(f"entry {uid} has dims {vec.dims}, index has {dims}")
        if uid in seen:
            raise ValueError(f"duplicate unit id {uid} in vector index")
        if all(v == 0.0 for v in vec.values):
            raise ValueError(f"entry {uid} is an all-zero vector")
        seen.add(uid)
    return VectorIndex(dims=dims, entries=list(entries))


def cosine_sim(u: EmbeddingVector, v: EmbeddingVector) -> float:
    if u.dims != v.dims:
        raise ValueError(f"dims mismatch: {u.dims} vs {v.dims}")
    dot = sum(a * b for a, b in zip(u.values, v.values))
    norm_u = math.sqrt(sum(a * a for a in u.values))
    norm_v = math.sqrt(sum(b * b for b in v.values))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return dot / (norm_u * norm_v)


def vector_topk(index: VectorIndex, query: EmbeddingVector, k: int) -> list[RetrievalResult]:
    """Exact scan: sort all entries by cosine, ties by ascending unit_id."""
    if query.dims != index.dims:
        raise ValueError(f"query dims {query.dims} do not match index dims {index.dims}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    n = len(index.entries)
    if k > n:
        log.warning("k=%d exceeds index size %d; returning all entries", k, n)
        k = n
    if k == 0:
        return []

    ids = np.array([uid for uid, _ in index.entries], dtype=np.int64)
    matrix = np.array([vec.values for _, vec in index.entries], dtype=np.float64)
    q = np.array(query.values, dtype=np.float64)
    q_norm = np.linalg.norm(q)
    if q_norm == 0.0:
        raise ValueError("cosine similarity is undefined for a zero query vector")
    scores = (matrix @ q) / (np.linalg.norm(matrix, axis=1) * q_norm)

    order = sorted(range(n), key=lambda i: (-scores[i], ids[i]))[:k]
    return [
        RetrievalResult(unit_id=int(ids[i]), score=float(scores[i]), rank=rank + 1)
        for rank, i in enumerate(order)
    ]
