"""Completion scoring: exact match, edit similarity, sentence BLEU.

All three scores live in [0,1]; reports scale to percentages. Predictions
and targets are single lines compared after trimming outer whitespace only,
since internal spacing is meaningful in formatted code.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .tokenizer import DEFAULT_TOKENIZER


@dataclass(frozen=True)
class EvalRecord:
    instance_id: int
    prediction: str
    target: str
    em: int
    es: float
    bleu: float

    def __post_init__(self) -> None:
        if self.em not in (0, 1):
            raise ValueError(f"em must be 0 or 1, got {self.em}")
        if not 0.0 <= self.es <= 1.0:
            raise ValueError(f"es out of range: {self.es}")
        if not 0.0 <= self.bleu <= 1.0:
            raise ValueError(f"bleu out of range: {self.bleu}")


@dataclass(frozen=True)
class EvalReport:
    strategy: str
    k: int
    n_instances: int
    em_pct: float
    es_pct: float
    bleu_pct: float
    latency_ref: str | None = None

    def __post_init__(self) -> None:
        for label, value in (("em_pct", self.em_pct), ("es_pct", self.es_pct), ("bleu_pct", self.bleu_pct)):
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{label} out of range: {value}")


def normalize_line(text: str) -> str:
    """Trim outer whitespace; internal spacing is untouched."""
    return text.strip()


def exact_match(pred: str, target: str) -> int:
    return int(normalize_line(pred) == normalize_line(target))


def edit_similarity(pred: str, target: str) -> float:
    """1 - levenshtein / max(len); both empty counts as 1."""
    if not pred and not target:
        return 1.0
    return 1.0 - _levenshtein(pred, target) / max(len(pred), len(target))


def _levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        curr = [i]
        for j, cb in enumerate(b, start=1):
            curr.append(min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = curr
    return prev[-1]


def bleu(pred: str, target: str, max_n: int = 4) -> float:
    """Sentence BLEU over code tokens.

    Geometric mean of modified n-gram precisions times the brevity penalty.
    For n >= 2 a raw zero precision is smoothed to (num+1)/(den+1); a zero
    unigram precision is not smoothed and yields 0.
    """
    pred_tokens = DEFAULT_TOKENIZER.tokenize(pred)
    target_tokens = DEFAULT_TOKENIZER.tokenize(target)
    if not pred_tokens:
        return 1.0 if not target_tokens else 0.0
    if not target_tokens:
        return 0.0

    log_sum = 0.0
    for n in range(1, max_n + 1):
        num, den = _modified_precision(pred_tokens, target_tokens, n)
        if n == 1:
            if num == 0:
                return 0.0
            p = num / den
        elif num == 0:
            p = (num + 1) / (den + 1)
        else:
            p = num / den
        log_sum += math.log(p)

    if len(pred_tokens) >= len(target_tokens):
        bp = 1.0
    else:
        bp = math.exp(1.0 - len(target_tokens) / len(pred_tokens))
    return bp * math.exp(log_sum / max_n)


def _modified_precision(pred_tokens: list[str], target_tokens: list[str], n: int) -> tuple[int, int]:
    pred_ngrams = Counter(_ngrams(pred_tokens, n))
    target_ngrams = Counter(_ngrams(target_tokens, n))
    num = sum(min(count, target_ngrams[gram]) for gram, count in pred_ngrams.items())
    den = max(len(pred_tokens) - n + 1, 0)
    return num, den


def _ngrams(tokens: list[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def truncate_to_first_line(model_output: str) -> str:
    return model_output.split("\n", 1)[0]


def score_instance(instance_id: int, raw_output: str, target: str) -> EvalRecord:
    """Score one completion: first line of the output against the target."""
    pred = normalize_line(truncate_to_first_line(raw_output))
    tgt = normalize_line(target)
    return EvalRecord(
        instance_id=instance_id,
        prediction=pred,
        target=tgt,
        em=exact_match(pred, tgt),
        es=edit_similarity(pred, tgt),
        bleu=bleu(pred, tgt),
    )


def aggregate(
    records: list[EvalRecord],
    strategy: str,
    k: int,
    latency_ref: str | None = None,
) -> EvalReport:
    """Mean scores as percentages, canonicalized by instance_id order."""
    if not records:
        raise ValueError("cannot aggregate zero records")
    ordered = sorted(records, key=lambda r: r.instance_id)
    n = len(ordered)
    return EvalReport(
        strategy=strategy,
        k=k,
        n_instances=n,
        em_pct=100.0 * sum(r.em for r in ordered) / n,
        es_pct=100.0 * sum(r.es for r in ordered) / n,
        bleu_pct=100.0 * sum(r.bleu for r in ordered) / n,
        latency_ref=latency_ref,
    )
