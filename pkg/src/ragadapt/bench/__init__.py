"""Experiment orchestration: runs, sweeps, timing, reports, charts."""

from .charts import ChartSeries, emit_charts, render_line_chart
from .config import ExperimentConfig, ProvidersConfig, load_config, render_config
from .reporting import emit_report
from .runner import (
    QualityGateError,
    RunContext,
    RunResult,
    build_run_context,
    make_providers,
    run_eval,
)
from .stats import LatencyStats, PhaseLatency, PreparationStats, ThroughputStats, latency_stats, throughput_stats
from .sweeps import (
    ScalePoint,
    TopkPoint,
    scale_chart_series,
    scale_subset,
    sweep_scale,
    sweep_topk,
    topk_chart_series,
)
from .timing import BACKENDS, build_timed, measure_preparation

__all__ = [
    "BACKENDS",
    "ChartSeries",
    "ExperimentConfig",
    "LatencyStats",
    "PhaseLatency",
    "PreparationStats",
    "ProvidersConfig",
    "QualityGateError",
    "RunContext",
    "RunResult",
    "ScalePoint",
    "ThroughputStats",
    "TopkPoint",
    "build_run_context",
    "build_timed",
    "emit_charts",
    "emit_report",
    "latency_stats",
    "load_config",
    "make_providers",
    "measure_preparation",
    "render_config",
    "render_line_chart",
    "run_eval",
    "scale_chart_series",
    "scale_subset",
    "sweep_scale",
    "sweep_topk",
    "throughput_stats",
    "topk_chart_series",
]
