"""Retrieval-corpus scaling sweep on a source tree.

Holds the benchmark fixed while the retrieval corpus is cut to nested
fractions of the tree, showing how exact match moves with corpus coverage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ragadapt.bench.charts import emit_charts
from ragadapt.bench.config import ExperimentConfig
from ragadapt.bench.reporting import emit_report
from ragadapt.bench.sweeps import scale_chart_series, sweep_scale
from ragadapt.corpus.benchmark import make_benchmark
from ragadapt.corpus.ingest import ingest


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", required=True, help="source tree to evaluate on")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--fractions", default="0.25,0.5,0.75,1.0",
                        help="comma-separated corpus fractions in (0,1]")
    parser.add_argument("--strategy", default="sim_bm25",
                        choices=("sim_bm25", "sim_vector", "dependency", "random"))
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--sample", type=int, default=500, help="benchmark sample size")
    parser.add_argument("--window", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    fractions = tuple(float(f) for f in args.fractions.split(","))
    files, report = ingest(args.root)
    if not files:
        print("error: no files survived ingest filtering", file=sys.stderr)
        return 1
    print(f"ingested {report.kept}/{report.total_scanned} files")

    instances = make_benchmark(files, window=args.window, sample=(args.sample, args.seed))
    if not instances:
        print("error: corpus too small for the benchmark window", file=sys.stderr)
        return 1

    cfg = ExperimentConfig(strategy=args.strategy, k=args.k, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    points = sweep_scale(cfg, instances, files, fractions, record_dir=out)

    emit_report([p.result.report for p in points], out)
    emit_charts(scale_chart_series(points), out / "charts")
    for p in points:
        r = p.result.report
        print(f"fraction={p.fraction} files={p.n_files} em={r.em_pct:.2f} es={r.es_pct:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
