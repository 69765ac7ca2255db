"""Shared retrieval domain types."""

from __future__ import annotations

import math
from dataclasses import dataclass

STRATEGIES = ("sim_bm25", "sim_vector", "dependency", "random")

_UNIT_NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingVector:
    dims: int
    values: tuple[float, ...]
    unit_norm: bool = False

    def __post_init__(self) -> None:
        if len(self.values) != self.dims:
            raise ValueError(f"expected {self.dims} values, got {len(self.values)}")
        if self.unit_norm:
            norm = math.sqrt(sum(v * v for v in self.values))
            if abs(norm - 1.0) > _UNIT_NORM_TOL:
                raise ValueError(f"unit_norm vector has norm {norm}")


@dataclass(frozen=True)
class RetrievalResult:
    unit_id: int
    score: float
    rank: int  # 1-based

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank is 1-based, got {self.rank}")


@dataclass(frozen=True)
class RetrievalConfig:
    strategy: str
    k: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")


@dataclass(frozen=True)
class CallSite:
    name: str
    line: int
    col: int


def check_result_list(results: list[RetrievalResult]) -> None:
    """Assert ranks are 1..n and scores never increase with rank."""
    for i, res in enumerate(results):
        if res.rank != i + 1:
            raise ValueError(f"rank sequence broken at position {i}: {res.rank}")
        if i > 0 and res.score > results[i - 1].score:
            raise ValueError(f"score increases at rank {res.rank}")
