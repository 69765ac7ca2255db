"""Command-line pipeline: ingest, index, bench-make, eval, sweep, report, ftprep.

Exit codes: 0 success, 1 data error, 2 provider error, 3 quality-gate
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .bench.config import ExperimentConfig, load_config, render_config
from .bench.reporting import emit_report
from .bench.runner import QualityGateError, build_run_context, make_providers, run_eval
from .bench.sweeps import (
    scale_chart_series,
    sweep_scale,
    sweep_topk,
    topk_chart_series,
)
from .bench.charts import emit_charts
from .bench.timing import BACKENDS, build_timed
from .corpus.benchmark import candidate_count, make_benchmark
from .corpus.blocks import pack_training_blocks
from .corpus.ingest import ingest
from .corpus.segment import segment_corpus
from .corpus.store import (
    load_benchmark,
    load_sources,
    load_units,
    write_benchmark,
    write_blocks,
    write_json,
    write_sources,
    write_units,
)
from .metrics import EvalReport
from .providers.types import ProviderError
from .retrieval.persist import save_lexical_symbols, save_vectors
from .retrieval.lexical import build_lexical_index
from .retrieval.symbols import build_symbol_index

EXIT_OK = 0
EXIT_DATA = 1
EXIT_PROVIDER = 2
EXIT_QUALITY = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 64."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QualityGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUALITY
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except (FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ragadapt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="scan a source tree into stores")
    p_ingest.add_argument("root", help="source tree to scan")
    p_ingest.add_argument("--out", required=True, help="output directory for stores")
    p_ingest.set_defaults(func=cmd_ingest)

    p_index = sub.add_parser("index", help="build a retrieval index from a unit store")
    p_index.add_argument("--units", required=True, help="unit store path")
    p_index.add_argument("--backend", choices=BACKENDS, default="bm25")
    p_index.add_argument("--out", required=True, help="index file path")
    _add_config_flags(p_index)
    p_index.set_defaults(func=cmd_index)

    p_bench = sub.add_parser("bench-make", help="build the sliding-window benchmark")
    p_bench.add_argument("--sources", required=True, help="sources store path")
    p_bench.add_argument("--out", required=True, help="benchmark store path")
    p_bench.add_argument("--window", type=int, default=20)
    p_bench.add_argument("--stride", type=int, default=1)
    p_bench.add_argument("--sample", type=int, default=None, help="instance sample size")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_bench_make)

    p_eval = sub.add_parser("eval", help="run one evaluation")
    p_eval.add_argument("--units", required=True, help="unit store path")
    p_eval.add_argument("--benchmark", required=True, help="benchmark store path")
    p_eval.add_argument("--out", required=True, help="output directory")
    p_eval.add_argument("--strategy", choices=("sim_bm25", "sim_vector", "dependency", "random"))
    p_eval.add_argument("--k", type=int)
    p_eval.add_argument("--seed", type=int)
    _add_config_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="sweep k or corpus fraction")
    p_sweep.add_argument("--units", help="unit store path (k sweep)")
    p_sweep.add_argument("--sources", help="sources store path (scale sweep)")
    p_sweep.add_argument("--benchmark", required=True, help="benchmark store path")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--ks", default="0..5", help="k values, e.g. 0..5 or 0,2,4")
    p_sweep.add_argument("--fractions", default=None, help="corpus fractions, e.g. 0.25,0.5,1.0")
    p_sweep.add_argument("--strategy", choices=("sim_bm25", "sim_vector", "dependency", "random"))
    p_sweep.add_argument("--seed", type=int)
    _add_config_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_report = sub.add_parser("report", help="aggregate record logs into report tables")
    p_report.add_argument("records", nargs="+", help="record log files")
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.set_defaults(func=cmd_report)

    p_ftprep = sub.add_parser("ftprep", help="pack training blocks for fine-tuning")
    p_ftprep.add_argument("--sources", required=True, help="sources store path")
    p_ftprep.add_argument("--out", required=True, help="block store path")
    p_ftprep.add_argument("--seq-len", type=int, default=4096)
    p_ftprep.set_defaults(func=cmd_ftprep)

    return parser


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="INI experiment config")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="config override, repeatable",
    )
    parser.add_argument("--mock-providers", action="store_true", help="use in-process mock providers")
    parser.add_argument("--print-config", action="store_true", help="print effective config and exit")


def _effective_config(args) -> ExperimentConfig:
    overrides = list(args.overrides)
    if args.mock_providers:
        overrides.append("providers.mock=true")
    cfg = load_config(args.config, overrides)
    if getattr(args, "strategy", None):
        cfg = replace(cfg, strategy=args.strategy)
    if getattr(args, "k", None) is not None:
        cfg = replace(cfg, k=args.k)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def cmd_ingest(args) -> int:
    files, report = ingest(args.root)
    if not files:
        print("error: no files passed the ingest filters", file=sys.stderr)
        return EXIT_DATA
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    units = segment_corpus(files)
    write_sources(out / "sources.jsonl", files)
    write_units(out / "units.jsonl", units)
    write_json(out / "filter_report.json", report.as_dict())
    print(f"scanned={report.total_scanned} kept={report.kept} units={len(units)}")
    print(
        "removed:"
        f" duplicate={report.removed_duplicate}"
        f" generated={report.removed_generated}"
        f" comment_heavy={report.removed_comment_heavy}"
        f" long_define={report.removed_long_define}"
        f" unreadable={report.removed_unreadable}"
    )
    return EXIT_OK


def cmd_index(args) -> int:
    cfg = _effective_config(args)
    if args.print_config:
        print(render_config(cfg), end="")
        return EXIT_OK
    units = load_units(args.units)
    if not units:
        print("error: unit store is empty", file=sys.stderr)
        return EXIT_DATA

    if args.backend in ("bm25", "symbol"):
        # the two share one index file; build both and report the requested one
        index, stats = build_timed(units, args.backend)
        lexical = index if args.backend == "bm25" else build_lexical_index({u.id: u.content for u in units})
        symbols = index if args.backend == "symbol" else build_symbol_index(units)
        save_lexical_symbols(args.out, lexical, symbols)
        if args.backend == "symbol":
            print(f"symbols={len(symbols.definitions)} definitions={sum(len(v) for v in symbols.definitions.values())}")
        else:
            print(f"documents={lexical.doc_count} terms={len(lexical.postings)}")
    else:
        embedder, _ = make_providers(cfg)
        index, stats = build_timed(units, "vector", embedder)
        save_vectors(args.out, index)
        print(f"vectors={len(index.entries)} dims={index.dims}")

    for phase in sorted(stats.durations_s):
        print(f"{phase}_s={stats.durations_s[phase]:.3f}")
    return EXIT_OK


def cmd_bench_make(args) -> int:
    files = load_sources(args.sources)
    candidates = candidate_count(files, args.window, args.stride)
    unsampled = make_benchmark(files, args.window, args.stride, sample=None)
    if args.sample is not None and args.sample > len(unsampled):
        print(
            f"error: sample {args.sample} exceeds {len(unsampled)} available instances",
            file=sys.stderr,
        )
        return EXIT_DATA
    instances = unsampled
    if args.sample is not None:
        instances = make_benchmark(files, args.window, args.stride, sample=(args.sample, args.seed))
    if not instances:
        print("error: zero benchmark instances after filtering", file=sys.stderr)
        return EXIT_DATA
    write_benchmark(args.out, instances, window=args.window, stride=args.stride)
    print(f"candidates={candidates} instances={len(instances)}")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _effective_config(args)
    if args.print_config:
        print(render_config(cfg), end="")
        return EXIT_OK
    units = load_units(args.units)
    instances = load_benchmark(args.benchmark)
    if not units or not instances:
        print("error: empty unit store or benchmark", file=sys.stderr)
        return EXIT_DATA

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ctx = build_run_context(units, cfg)
    result = run_eval(
        cfg,
        instances,
        ctx,
        record_path=out / "records.jsonl",
        timing_path=out / "timings.json",
    )
    emit_report([result.report], out)
    r = result.report
    print(
        f"strategy={r.strategy} k={r.k} n={r.n_instances} failed={result.n_failed} "
        f"em={r.em_pct:.2f} es={r.es_pct:.2f} bleu={r.bleu_pct:.2f} "
        f"tokens_per_second={result.throughput.tokens_per_second:.1f}"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _effective_config(args)
    if args.print_config:
        print(render_config(cfg), end="")
        return EXIT_OK
    instances = load_benchmark(args.benchmark)
    if not instances:
        print("error: empty benchmark", file=sys.stderr)
        return EXIT_DATA
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.fractions:
        if not args.sources:
            print("error: scale sweep needs --sources", file=sys.stderr)
            return EXIT_USAGE
        fractions = tuple(float(f) for f in args.fractions.split(","))
        files = load_sources(args.sources)
        points = sweep_scale(cfg, instances, files, fractions, record_dir=out)
        emit_report([p.result.report for p in points], out)
        emit_charts(scale_chart_series(points), out / "charts")
        for p in points:
            print(
                f"fraction={p.fraction} files={p.n_files} "
                f"em={p.result.report.em_pct:.2f} es={p.result.report.es_pct:.2f}"
            )
    else:
        if not args.units:
            print("error: k sweep needs --units", file=sys.stderr)
            return EXIT_USAGE
        ks = _parse_ks(args.ks)
        units = load_units(args.units)
        ctx = build_run_context(units, cfg)
        points = sweep_topk(cfg, instances, ctx, ks, record_dir=out)
        emit_report([p.result.report for p in points], out)
        emit_charts(topk_chart_series(points), out / "charts")
        for p in points:
            print(
                f"k={p.k} em={p.result.report.em_pct:.2f} "
                f"prompt_tokens={p.result.throughput.prompt_tokens} "
                f"tokens_per_second={p.result.throughput.tokens_per_second:.1f}"
            )
    return EXIT_OK


def cmd_report(args) -> int:
    reports = [_report_from_records(path) for path in args.records]
    emit_report(reports, args.out)
    for r in sorted(reports, key=lambda r: (r.strategy, r.k)):
        print(f"strategy={r.strategy} k={r.k} n={r.n_instances} em={r.em_pct:.2f}")
    return EXIT_OK


def cmd_ftprep(args) -> int:
    if args.seq_len < 2:
        print("error: --seq-len must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    files = load_sources(args.sources)
    if not files:
        print("error: sources store is empty", file=sys.stderr)
        return EXIT_DATA
    blocks = pack_training_blocks(files, args.seq_len)
    write_blocks(args.out, blocks)
    print(f"blocks={len(blocks)} block_len={args.seq_len}")
    return EXIT_OK


def _parse_ks(raw: str) -> tuple[int, ...]:
    raw = raw.strip()
    if ".." in raw:
        lo, _, hi = raw.partition("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(part) for part in raw.split(","))


def _report_from_records(path: str) -> EvalReport:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("kind") != "records":
            raise ValueError(f"{path} is not a record log")
        rows = [json.loads(line) for line in fh if line.strip()]
    if not rows:
        raise ValueError(f"record log {path} has no records")
    n = len(rows)
    return EvalReport(
        strategy=header["strategy"],
        k=header["k"],
        n_instances=n,
        em_pct=100.0 * sum(r["em"] for r in rows) / n,
        es_pct=100.0 * sum(r["es"] for r in rows) / n,
        bleu_pct=100.0 * sum(r["bleu"] for r in rows) / n,
    )


if __name__ == "__main__":
    sys.exit(main())
