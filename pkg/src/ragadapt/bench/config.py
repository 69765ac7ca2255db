"""Experiment configuration: dataclasses plus INI-file parsing.

The config file uses INI sections {corpus, retrieval, prompt, providers,
bench}; command-line overrides take the form section.key=value and apply
after the file is parsed. The separator value may use backslash escapes
(\\n) since INI cannot hold raw newlines.
"""

from __future__ import annotations

import codecs
import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..prompt import PromptConfig
from ..providers.mocks import DEFAULT_MS_PER_PROMPT_TOKEN
from ..retrieval.types import STRATEGIES

_MOCK_COMPLETERS = ("copy_oracle", "constant")


@dataclass(frozen=True)
class ProvidersConfig:
    mock: bool = True
    mock_completer: str = "copy_oracle"
    copy_match_lines: int = 3
    ms_per_prompt_token: float = DEFAULT_MS_PER_PROMPT_TOKEN
    embed_endpoint: str = ""
    embed_model: str = "mock-embed"
    embed_dims: int = 256
    embed_batch_size: int = 16
    embed_seed: int = 0
    completion_endpoint: str = ""
    timeout_ms: int = 30_000
    retries: int = 3

    def __post_init__(self) -> None:
        if self.mock_completer not in _MOCK_COMPLETERS:
            raise ValueError(f"mock_completer must be one of {_MOCK_COMPLETERS}")
        if self.embed_dims < 8:
            raise ValueError(f"embed_dims must be >= 8, got {self.embed_dims}")
        if self.embed_batch_size < 1:
            raise ValueError(f"embed_batch_size must be >= 1, got {self.embed_batch_size}")
        if not self.mock:
            if not self.embed_endpoint or not self.completion_endpoint:
                raise ValueError("non-mock providers require embed_endpoint and completion_endpoint")


@dataclass(frozen=True)
class ExperimentConfig:
    root: str = ""
    out_dir: str = "out"
    window: int = 20
    stride: int = 1
    sample_count: int | None = None
    strategy: str = "sim_bm25"
    k: int = 5
    corpus_fraction: float = 1.0
    seed: int = 0
    concurrency: int = 8
    max_gen_tokens: int = 512
    max_failure_rate: float = 0.05
    prompt: PromptConfig = field(default_factory=PromptConfig)
    providers: ProvidersConfig = field(default_factory=ProvidersConfig)

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if not 0.0 < self.corpus_fraction <= 1.0:
            raise ValueError(f"corpus_fraction must be in (0,1], got {self.corpus_fraction}")
        if self.concurrency < 1:
            raise ValueError(f"concurrency must be >= 1, got {self.concurrency}")
        if self.max_gen_tokens < 1:
            raise ValueError(f"max_gen_tokens must be >= 1, got {self.max_gen_tokens}")
        if not 0.0 <= self.max_failure_rate <= 1.0:
            raise ValueError(f"max_failure_rate must be in [0,1], got {self.max_failure_rate}")


def load_config(path: str | Path | None, overrides: list[str] | None = None) -> ExperimentConfig:
    """Parse an INI config file, then apply section.key=value overrides."""
    sections: dict[str, dict[str, str]] = {}
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(str(path), encoding="utf-8")
        if not read:
            raise FileNotFoundError(f"config file not found: {path}")
        sections = {name: dict(parser[name]) for name in parser.sections()}
    for override in overrides or []:
        key, eq, value = override.partition("=")
        if not eq or "." not in key:
            raise ValueError(f"override must look like section.key=value, got {override!r}")
        section, _dot, name = key.partition(".")
        sections.setdefault(section.strip(), {})[name.strip()] = value.strip()
    return _config_from_sections(sections)


def _config_from_sections(sections: dict[str, dict[str, str]]) -> ExperimentConfig:
    corpus = sections.get("corpus", {})
    retrieval = sections.get("retrieval", {})
    prompt = sections.get("prompt", {})
    providers = sections.get("providers", {})
    bench = sections.get("bench", {})
    _reject_unknown("corpus", corpus, {"root", "window", "stride", "sample_count"})
    _reject_unknown("retrieval", retrieval, {"strategy", "k"})
    _reject_unknown("prompt", prompt, {"separator", "max_prompt_tokens", "include_source_header"})
    _reject_unknown("providers", providers, {f.name for f in fields(ProvidersConfig)})
    _reject_unknown(
        "bench",
        bench,
        {"seed", "concurrency", "corpus_fraction", "out_dir", "max_failure_rate", "max_gen_tokens"},
    )

    prompt_cfg = PromptConfig(
        separator=_unescape(prompt.get("separator", "\\n\\n")),
        max_prompt_tokens=int(prompt.get("max_prompt_tokens", PromptConfig().max_prompt_tokens)),
        include_source_header=_parse_bool(prompt.get("include_source_header", "false")),
    )
    providers_cfg = ProvidersConfig(
        mock=_parse_bool(providers.get("mock", "true")),
        mock_completer=providers.get("mock_completer", "copy_oracle"),
        copy_match_lines=int(providers.get("copy_match_lines", 3)),
        ms_per_prompt_token=float(providers.get("ms_per_prompt_token", DEFAULT_MS_PER_PROMPT_TOKEN)),
        embed_endpoint=providers.get("embed_endpoint", ""),
        embed_model=providers.get("embed_model", "mock-embed"),
        embed_dims=int(providers.get("embed_dims", 256)),
        embed_batch_size=int(providers.get("embed_batch_size", 16)),
        embed_seed=int(providers.get("embed_seed", 0)),
        completion_endpoint=providers.get("completion_endpoint", ""),
        timeout_ms=int(providers.get("timeout_ms", 30_000)),
        retries=int(providers.get("retries", 3)),
    )
    sample_raw = corpus.get("sample_count", "")
    return ExperimentConfig(
        root=corpus.get("root", ""),
        window=int(corpus.get("window", 20)),
        stride=int(corpus.get("stride", 1)),
        sample_count=int(sample_raw) if sample_raw else None,
        strategy=retrieval.get("strategy", "sim_bm25"),
        k=int(retrieval.get("k", 5)),
        corpus_fraction=float(bench.get("corpus_fraction", 1.0)),
        seed=int(bench.get("seed", 0)),
        concurrency=int(bench.get("concurrency", 8)),
        max_gen_tokens=int(bench.get("max_gen_tokens", 512)),
        max_failure_rate=float(bench.get("max_failure_rate", 0.05)),
        out_dir=bench.get("out_dir", "out"),
        prompt=prompt_cfg,
        providers=providers_cfg,
    )


def render_config(cfg: ExperimentConfig) -> str:
    """Effective config in the same INI shape the loader accepts."""
    lines = [
        "[corpus]",
        f"root = {cfg.root}",
        f"window = {cfg.window}",
        f"stride = {cfg.stride}",
        f"sample_count = {'' if cfg.sample_count is None else cfg.sample_count}",
        "",
        "[retrieval]",
        f"strategy = {cfg.strategy}",
        f"k = {cfg.k}",
        "",
        "[prompt]",
        f"separator = {_escape(cfg.prompt.separator)}",
        f"max_prompt_tokens = {cfg.prompt.max_prompt_tokens}",
        f"include_source_header = {str(cfg.prompt.include_source_header).lower()}",
        "",
        "[providers]",
        f"mock = {str(cfg.providers.mock).lower()}",
        f"mock_completer = {cfg.providers.mock_completer}",
        f"copy_match_lines = {cfg.providers.copy_match_lines}",
        f"ms_per_prompt_token = {cfg.providers.ms_per_prompt_token}",
        f"embed_endpoint = {cfg.providers.embed_endpoint}",
        f"embed_model = {cfg.providers.embed_model}",
        f"embed_dims = {cfg.providers.embed_dims}",
        f"embed_batch_size = {cfg.providers.embed_batch_size}",
        f"embed_seed = {cfg.providers.embed_seed}",
        f"completion_endpoint = {cfg.providers.completion_endpoint}",
        f"timeout_ms = {cfg.providers.timeout_ms}",
        f"retries = {cfg.providers.retries}",
        "",
        "[bench]",
        f"seed = {cfg.seed}",
        f"concurrency = {cfg.concurrency}",
        f"corpus_fraction = {cfg.corpus_fraction}",
        f"out_dir = {cfg.out_dir}",
        f"max_failure_rate = {cfg.max_failure_rate}",
        f"max_gen_tokens = {cfg.max_gen_tokens}",
    ]
    return "\n".join(lines) + "\n"


def with_k(cfg: ExperimentConfig, k: int) -> ExperimentConfig:
    return replace(cfg, k=k)


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _unescape(raw: str) -> str:
    return codecs.decode(raw, "unicode_escape")


def _escape(value: str) -> str:
    return value.encode("unicode_escape").decode("ascii")


def _reject_unknown(section: str, given: dict[str, str], allowed: set[str]) -> None:
    unknown = set(given) - allowed
    if unknown:
        raise ValueError(f"unknown keys in [{section}]: {sorted(unknown)}")
