"""Efficiency measurement types: latency, throughput, preparation cost."""

from __future__ import annotations

import math
from dataclasses import dataclass

PHASES = ("embed_query", "retrieve", "assemble", "complete")


@dataclass(frozen=True)
class PhaseLatency:
    mean_ms: float
    p50_ms: float
    p95_ms: float

    def __post_init__(self) -> None:
        if self.p50_ms > self.p95_ms + 1e-9:
            raise ValueError(f"p50 {self.p50_ms} exceeds p95 {self.p95_ms}")


@dataclass(frozen=True)
class LatencyStats:
    phases: dict[str, PhaseLatency]
    count: int

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "phases": {
                name: {"mean_ms": p.mean_ms, "p50_ms": p.p50_ms, "p95_ms": p.p95_ms}
                for name, p in sorted(self.phases.items())
            },
        }


@dataclass(frozen=True)
class ThroughputStats:
    prompt_tokens: int
    completion_tokens: int
    wall_time_s: float
    tokens_per_second: float

    def as_dict(self) -> dict:
        return {
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "wall_time_s": self.wall_time_s,
            "tokens_per_second": self.tokens_per_second,
        }


@dataclass(frozen=True)
class PreparationStats:
    durations_s: dict[str, float]  # phase -> seconds

    def __post_init__(self) -> None:
        for phase, duration in self.durations_s.items():
            if duration < 0:
                raise ValueError(f"negative duration for phase {phase}: {duration}")


def latency_stats(samples_by_phase: dict[str, list[float]]) -> LatencyStats:
    phases = {}
    count = 0
    for name, samples in samples_by_phase.items():
        if not samples:
            continue
        count = max(count, len(samples))
        ordered = sorted(samples)
        phases[name] = PhaseLatency(
            mean_ms=sum(ordered) / len(ordered),
            p50_ms=_quantile(ordered, 0.50),
            p95_ms=_quantile(ordered, 0.95),
        )
    return LatencyStats(phases=phases, count=count)


def throughput_stats(prompt_tokens: int, completion_tokens: int, wall_time_s: float) -> ThroughputStats:
    total = prompt_tokens + completion_tokens
    tps = total / wall_time_s if wall_time_s > 0 else math.inf if total else 0.0
    return ThroughputStats(
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
        wall_time_s=wall_time_s,
        tokens_per_second=tps,
    )


def _quantile(ordered: list[float], q: float) -> float:
    """Nearest-rank quantile on a pre-sorted sample."""
    idx = max(math.ceil(q * len(ordered)) - 1, 0)
    return ordered[idx]
