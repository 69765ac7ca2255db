"""Sliding-window completion benchmark construction.

Every window of W consecutive lines becomes a context whose target is the
following line. Targets that carry no signal are dropped: blank after
trimming, single-symbol lines (one character, or punctuation only), and
comment-only lines.
"""

from __future__ import annotations

import logging
import random

from ..tokenizer import DEFAULT_TOKENIZER
from .types import CompletionInstance, SourceFile

log = logging.getLogger(__name__)


def make_benchmark(
    files: list[SourceFile],
    window: int = 20,
    stride: int = 1,
    sample: tuple[int, int] | None = None,
) -> list[CompletionInstance]:
    """Build completion instances from files by sliding a line window.

    ``sample`` is an optional (count, seed) pair: a uniform draw without
    replacement after filtering, deterministic for a fixed seed. Instance
    ids are assigned before sampling so a sampled subset keeps stable ids.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")

    instances: list[CompletionInstance] = []
    candidates = 0
    for file in sorted(files, key=lambda f: f.path):
        lines = file.lines()
        for start in range(0, len(lines) - window, stride):
            candidates += 1
            target = lines[start + window]
            if not _is_usable_target(target):
                continue
            context = "\n".join(lines[start : start + window])
            instances.append(
                CompletionInstance(
                    id=len(instances),
                    source_path=file.path,
                    context=context,
                    target=target,
                    context_token_count=DEFAULT_TOKENIZER.count(context),
                )
            )
    log.info("benchmark: %d candidates, %d kept after target filtering", candidates, len(instances))

    if sample is not None:
        count, seed = sample
        if count < len(instances):
            rng = random.Random(seed)
            instances = sorted(rng.sample(instances, count), key=lambda inst: inst.id)
    return instances


def candidate_count(files: list[SourceFile], window: int = 20, stride: int = 1) -> int:
    """Number of raw windows before target filtering."""
    return sum(len(range(0, f.line_count - window, stride)) for f in files)


def _is_usable_target(target: str) -> bool:
    t = target.strip()
    if not t:
        return False
    if len(t) <= 1:
        return False
    if all(not ch.isalnum() and ch != "_" for ch in t):
        return False  # punctuation-only line such as "});"
    if t.startswith("//") or (t.startswith("/*") and t.endswith("*/")):
        return False
    return True
