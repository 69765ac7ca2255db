"""Parameter sweeps: retrieval depth (k) and corpus scale."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from pathlib import Path

from ..corpus.segment import segment_corpus
from ..corpus.types import CompletionInstance, SourceFile
from .charts import ChartSeries
from .config import ExperimentConfig
from .runner import RunContext, RunResult, build_run_context, run_eval


@dataclass
class TopkPoint:
    k: int
    result: RunResult


@dataclass
class ScalePoint:
    fraction: float
    n_files: int
    result: RunResult


def sweep_topk(
    cfg: ExperimentConfig,
    instances: list[CompletionInstance],
    ctx: RunContext,
    ks: tuple[int, ...] = (0, 1, 2, 3, 4, 5),
    record_dir: str | Path | None = None,
) -> list[TopkPoint]:
    """One evaluation per k over a shared context (indexes are k-independent)."""
    points = []
    for k in ks:
        record_path = Path(record_dir) / f"records_k{k}.jsonl" if record_dir is not None else None
        result = run_eval(replace(cfg, k=k), instances, ctx, record_path=record_path)
        points.append(TopkPoint(k=k, result=result))
    return points


def scale_subset(files: list[SourceFile], fraction: float, seed: int) -> list[SourceFile]:
    """Deterministic prefix subset: one seeded shuffle shared by all
    fractions, so smaller subsets are strict subsets of larger ones."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0,1], got {fraction}")
    ordered = sorted(files, key=lambda f: f.path)
    rng = random.Random(seed)
    rng.shuffle(ordered)
    count = math.ceil(fraction * len(ordered))
    if count == 0:
        raise ValueError(f"fraction {fraction} yields an empty subset")
    return ordered[:count]


def sweep_scale(
    cfg: ExperimentConfig,
    instances: list[CompletionInstance],
    files: list[SourceFile],
    fractions: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0),
    embedder=None,
    completer=None,
    record_dir: str | Path | None = None,
) -> list[ScalePoint]:
    """Rebuild the retrieval corpus at each fraction and evaluate."""
    if not files:
        raise ValueError("cannot sweep over an empty corpus")
    points = []
    for fraction in fractions:
        subset = scale_subset(files, fraction, cfg.seed)
        units = segment_corpus(subset)
        ctx = build_run_context(units, replace(cfg, corpus_fraction=fraction), embedder, completer)
        record_path = (
            Path(record_dir) / f"records_f{_fraction_tag(fraction)}.jsonl" if record_dir is not None else None
        )
        result = run_eval(replace(cfg, corpus_fraction=fraction), instances, ctx, record_path=record_path)
        points.append(ScalePoint(fraction=fraction, n_files=len(subset), result=result))
    return points


def _fraction_tag(fraction: float) -> str:
    return f"{fraction:.4f}".rstrip("0").rstrip(".").replace(".", "_")


def topk_chart_series(points: list[TopkPoint]) -> list[ChartSeries]:
    return [
        ChartSeries(
            name="em_vs_k",
            title="Exact match vs retrieval depth",
            x_label="k (retrieved units)",
            y_label="exact match (%)",
            points=tuple((float(p.k), p.result.report.em_pct) for p in points),
        ),
        ChartSeries(
            name="prompt_tokens_vs_k",
            title="Mean prompt tokens vs retrieval depth",
            x_label="k (retrieved units)",
            y_label="prompt tokens (mean)",
            points=tuple(
                (float(p.k), p.result.throughput.prompt_tokens / p.result.report.n_instances)
                for p in points
            ),
        ),
        ChartSeries(
            name="tokens_per_second_vs_k",
            title="Throughput vs retrieval depth",
            x_label="k (retrieved units)",
            y_label="tokens per second",
            points=tuple((float(p.k), p.result.throughput.tokens_per_second) for p in points),
        ),
    ]


def scale_chart_series(points: list[ScalePoint]) -> list[ChartSeries]:
    return [
        ChartSeries(
            name="em_vs_fraction",
            title="Exact match vs corpus fraction",
            x_label="corpus fraction",
            y_label="exact match (%)",
            points=tuple((p.fraction, p.result.report.em_pct) for p in points),
        )
    ]
