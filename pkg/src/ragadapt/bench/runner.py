"""End-to-end evaluation runner: retrieve, assemble, complete, score.

Per instance the runner retrieves units for the configured strategy,
assembles the prompt, requests a completion, truncates it to one line, and
scores it. Records are keyed and written in instance_id order no matter how
the thread pool interleaves, so identical configs give identical record
files.

Latency accounting is split on purpose: the record log carries only
provider-reported latencies (deterministic under mocks), while real
wall-clock phase measurements go to LatencyStats and the optional timings
file, which is expected to differ between runs.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..corpus.store import dump_compact
from ..corpus.types import CompletionInstance, RetrievalUnit
from ..metrics import EvalRecord, EvalReport, aggregate, score_instance
from ..prompt import PromptBudgetError, PromptBundle, PromptConfig, assemble_dependency_prompt, assemble_similarity_prompt
from ..providers.mocks import ConstantCompleter, CopyOracleCompleter, MockEmbeddingProvider
from ..providers.http import HttpCompletionProvider, HttpEmbeddingProvider
from ..providers.types import (
    CompletionProviderConfig,
    CompletionRequest,
    CompletionResponse,
    EmbeddingProviderConfig,
    ProviderError,
)
from ..retrieval.calls import extract_calls
from ..retrieval.lexical import LexicalIndex, build_lexical_index, lexical_topk
from ..retrieval.random_baseline import random_retrieve
from ..retrieval.symbols import SymbolIndex, build_symbol_index, dependency_retrieve
from ..retrieval.types import RetrievalResult
from ..retrieval.vector import VectorIndex, build_vector_index, vector_topk
from .config import ExperimentConfig
from .stats import LatencyStats, ThroughputStats, latency_stats, throughput_stats

log = logging.getLogger(__name__)

RECORDS_FORMAT_VERSION = 1


class QualityGateError(RuntimeError):
    """Too many instances failed for the run to be trustworthy."""


@dataclass
class RunContext:
    units: dict[int, RetrievalUnit]
    completer: object
    embedder: object | None = None
    lexical: LexicalIndex | None = None
    vectors: VectorIndex | None = None
    symbols: SymbolIndex | None = None


@dataclass
class RunResult:
    report: EvalReport
    latency: LatencyStats
    throughput: ThroughputStats
    records: list[EvalRecord]
    n_failed: int


def make_providers(cfg: ExperimentConfig) -> tuple[object, object]:
    """(embedder, completer) per config; mocks when providers.mock is set."""
    p = cfg.providers
    if p.mock:
        embedder = MockEmbeddingProvider(dims=p.embed_dims, seed=p.embed_seed, model_name=p.embed_model)
        if p.mock_completer == "constant":
            completer = ConstantCompleter(ms_per_prompt_token=p.ms_per_prompt_token)
        else:
            completer = CopyOracleCompleter(
                match_lines=p.copy_match_lines, ms_per_prompt_token=p.ms_per_prompt_token
            )
        return embedder, completer
    embedder = HttpEmbeddingProvider(
        EmbeddingProviderConfig(
            endpoint=p.embed_endpoint,
            model_name=p.embed_model,
            dims=p.embed_dims,
            batch_size=p.embed_batch_size,
            timeout_ms=p.timeout_ms,
            retries=p.retries,
        )
    )
    completer = HttpCompletionProvider(
        CompletionProviderConfig(endpoint=p.completion_endpoint, timeout_ms=p.timeout_ms, retries=p.retries)
    )
    return embedder, completer


def build_run_context(units: list[RetrievalUnit], cfg: ExperimentConfig, embedder=None, completer=None) -> RunContext:
    """Build exactly the indexes the configured strategy needs."""
    if embedder is None or completer is None:
        made_embedder, made_completer = make_providers(cfg)
        embedder = embedder or made_embedder
        completer = completer or made_completer
    ctx = RunContext(units={u.id: u for u in units}, completer=completer, embedder=embedder)
    if cfg.strategy == "sim_bm25":
        ctx.lexical = build_lexical_index({u.id: u.content for u in units})
    elif cfg.strategy == "sim_vector":
        vectors = embedder.embed_batch([u.content for u in units])
        ctx.vectors = build_vector_index([(u.id, v) for u, v in zip(units, vectors)])
    elif cfg.strategy == "dependency":
        ctx.symbols = build_symbol_index(units)
    return ctx


def run_eval(
    cfg: ExperimentConfig,
    instances: list[CompletionInstance],
    ctx: RunContext,
    record_path: str | Path | None = None,
    timing_path: str | Path | None = None,
) -> RunResult:
    if not instances:
        raise ValueError("cannot evaluate zero instances")

    with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
        outcomes = list(pool.map(lambda inst: _run_instance(cfg, inst, ctx), instances))

    failures = [(inst.id, err) for inst, (err, _) in zip(instances, outcomes) if err is not None]
    if failures:
        rate = len(failures) / len(instances)
        for iid, err in failures[:10]:
            log.warning("instance %d failed: %s", iid, err)
        if rate > cfg.max_failure_rate:
            raise QualityGateError(
                f"{len(failures)}/{len(instances)} instances failed "
                f"({rate:.1%} > {cfg.max_failure_rate:.1%} threshold)"
            )

    succeeded = [payload for err, payload in outcomes if err is None]
    succeeded.sort(key=lambda item: item[0].instance_id)
    records = [rec for rec, _, _, _ in succeeded]
    if not records:
        raise QualityGateError("all instances failed")

    real_samples: dict[str, list[float]] = {}
    for _, _, _, phases in succeeded:
        for name, ms in phases.items():
            real_samples.setdefault(name, []).append(ms)
    latency = latency_stats(real_samples)

    throughput = throughput_stats(
        prompt_tokens=sum(resp.prompt_tokens for _, _, resp, _ in succeeded),
        completion_tokens=sum(resp.completion_tokens for _, _, resp, _ in succeeded),
        wall_time_s=sum(resp.latency_ms for _, _, resp, _ in succeeded) / 1000.0,
    )

    if record_path is not None:
        _write_records(record_path, cfg, succeeded)
    if timing_path is not None:
        _write_timings(timing_path, latency, throughput)

    report = aggregate(records, strategy=cfg.strategy, k=cfg.k, latency_ref=str(timing_path) if timing_path else None)
    return RunResult(
        report=report,
        latency=latency,
        throughput=throughput,
        records=records,
        n_failed=len(failures),
    )


def _run_instance(
    cfg: ExperimentConfig,
    inst: CompletionInstance,
    ctx: RunContext,
) -> tuple[str | None, tuple[EvalRecord, PromptBundle, CompletionResponse, dict[str, float]] | None]:
    """Returns (error, payload); exactly one is set."""
    try:
        phases: dict[str, float] = {}
        t0 = time.perf_counter()
        ordered_units = _retrieve(cfg, inst, ctx, phases)
        phases.setdefault("embed_query", 0.0)
        phases["retrieve"] = (time.perf_counter() - t0) * 1000.0 - phases["embed_query"]

        t1 = time.perf_counter()
        if cfg.strategy == "dependency":
            bundle = assemble_dependency_prompt(ordered_units, inst.context, cfg.prompt)
        else:
            bundle = _assemble_by_priority(ordered_units, inst.context, cfg.prompt)
        phases["assemble"] = (time.perf_counter() - t1) * 1000.0

        t2 = time.perf_counter()
        response = ctx.completer.complete(
            CompletionRequest(prompt=bundle.prompt_text, max_tokens=cfg.max_gen_tokens)
        )
        phases["complete"] = (time.perf_counter() - t2) * 1000.0

        record = score_instance(inst.id, response.text, inst.target)
        return None, (record, bundle, response, phases)
    except (ProviderError, PromptBudgetError) as exc:
        return f"{type(exc).__name__}: {exc}", None


def _retrieve(
    cfg: ExperimentConfig,
    inst: CompletionInstance,
    ctx: RunContext,
    phases: dict[str, float],
) -> list[RetrievalUnit]:
    """Units in descending keep-priority (most similar / first called first)."""
    if cfg.k == 0:
        return []  # base run: query-only prompts for every strategy
    if cfg.strategy == "sim_bm25":
        results = lexical_topk(ctx.lexical, inst.context, cfg.k)
    elif cfg.strategy == "sim_vector":
        t = time.perf_counter()
        query_vec = ctx.embedder.embed_batch([inst.context])[0]
        phases["embed_query"] = (time.perf_counter() - t) * 1000.0
        results = vector_topk(ctx.vectors, query_vec, cfg.k)
    elif cfg.strategy == "dependency":
        calls = extract_calls(inst.context)
        results = dependency_retrieve(ctx.symbols, calls, query_path=inst.source_path).results
    elif cfg.strategy == "random":
        k = min(cfg.k, len(ctx.units))
        if k < cfg.k:
            log.warning("k=%d exceeds corpus size %d; clamped", cfg.k, len(ctx.units))
        seed = (cfg.seed * 1_000_003 + inst.id) & 0x7FFFFFFFFFFFFFFF
        results = random_retrieve(ctx.units.keys(), k, seed)
    else:
        raise ValueError(f"unknown strategy {cfg.strategy!r}")
    return [ctx.units[r.unit_id] for r in results]


def _assemble_by_priority(ordered_units: list[RetrievalUnit], query: str, prompt_cfg: PromptConfig) -> PromptBundle:
    """Similarity-style assembly from units already in priority order."""
    results = [
        RetrievalResult(unit_id=u.id, score=float(len(ordered_units) - i), rank=i + 1)
        for i, u in enumerate(ordered_units)
    ]
    units = {u.id: u for u in ordered_units}
    return assemble_similarity_prompt(results, units, query, prompt_cfg)


def _write_records(
    path: str | Path,
    cfg: ExperimentConfig,
    succeeded: list[tuple[EvalRecord, PromptBundle, CompletionResponse, dict[str, float]]],
) -> None:
    header = {
        "format_version": RECORDS_FORMAT_VERSION,
        "kind": "records",
        "strategy": cfg.strategy,
        "k": cfg.k,
        "seed": cfg.seed,
    }
    lines = [dump_compact(header)]
    for record, bundle, response, _phases in succeeded:
        lines.append(
            dump_compact(
                {
                    "instance_id": record.instance_id,
                    "strategy": cfg.strategy,
                    "k": cfg.k,
                    "included_unit_ids": list(bundle.included_unit_ids),
                    "prompt_tokens": bundle.prompt_token_count,
                    "prediction": record.prediction,
                    "em": record.em,
                    "es": record.es,
                    "bleu": record.bleu,
                    "phase_latencies_ms": {
                        "embed_query": 0.0,
                        "retrieve": 0.0,
                        "assemble": 0.0,
                        "complete": response.latency_ms,
                    },
                }
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_timings(path: str | Path, latency: LatencyStats, throughput: ThroughputStats) -> None:
    payload = {"latency": latency.as_dict(), "throughput": throughput.as_dict()}
    Path(path).write_text(dump_compact(payload) + "\n", encoding="utf-8", newline="\n")
