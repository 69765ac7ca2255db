"""Random retrieval baseline: uniform draw without replacement."""

from __future__ import annotations

import random
from typing import Iterable

from .types import RetrievalResult


def random_retrieve(unit_ids: Iterable[int], k: int, seed: int) -> list[RetrievalResult]:
    ids = sorted(unit_ids)
    if k > len(ids):
        raise ValueError(f"k={k} exceeds population of {len(ids)} units")
    rng = random.Random(seed)
    chosen = rng.sample(ids, k)
    return [RetrievalResult(unit_id=uid, score=1.0, rank=i + 1) for i, uid in enumerate(chosen)]
