"""Prompt assembly from retrieved units with token budgeting.

Similarity prompts concatenate retrieved units in ascending similarity, so
the most similar unit sits directly before the query. Dependency prompts
put the first-called definition directly before the query. When the budget
is exceeded, whole units are dropped from the far end of the prompt (least
similar, or last called) so the pieces nearest the query survive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus.types import RetrievalUnit
from .retrieval.types import RetrievalResult
from .tokenizer import DEFAULT_TOKENIZER

DEFAULT_MAX_PROMPT_TOKENS = 4096 - 512  # model window minus generation room


class PromptBudgetError(ValueError):
    """The query alone does not fit the prompt budget."""


@dataclass(frozen=True)
class PromptConfig:
    separator: str = "\n\n"
    max_prompt_tokens: int = DEFAULT_MAX_PROMPT_TOKENS
    include_source_header: bool = False

    def __post_init__(self) -> None:
        if self.max_prompt_tokens <= 0:
            raise ValueError(f"max_prompt_tokens must be > 0, got {self.max_prompt_tokens}")


@dataclass(frozen=True)
class PromptBundle:
    prompt_text: str
    query_text: str
    included_unit_ids: tuple[int, ...]  # concatenation order
    prompt_token_count: int
    truncated: bool

    def __post_init__(self) -> None:
        if not self.prompt_text.endswith(self.query_text):
            raise ValueError("query_text must be a suffix of prompt_text")


def count_tokens(text: str) -> int:
    return DEFAULT_TOKENIZER.count(text)


def assemble_similarity_prompt(
    results: list[RetrievalResult],
    units: dict[int, RetrievalUnit],
    query: str,
    cfg: PromptConfig | None = None,
) -> PromptBundle:
    """Units ordered least similar first, most similar adjacent to the query."""
    for i in range(1, len(results)):
        if results[i].score > results[i - 1].score:
            raise ValueError("results must be sorted by descending score")
    ordered = [units[r.unit_id] for r in results]  # descending keep-priority
    return _assemble(ordered, query, cfg or PromptConfig())


def assemble_dependency_prompt(
    defs: list[RetrievalUnit],
    query: str,
    cfg: PromptConfig | None = None,
) -> PromptBundle:
    """Definitions in call order; the first-called ends up adjacent to the
    query and later calls stack in front of it."""
    return _assemble(list(defs), query, cfg or PromptConfig())


def _assemble(units_by_priority: list[RetrievalUnit], query: str, cfg: PromptConfig) -> PromptBundle:
    """Keep the longest priority prefix that fits, render it reversed.

    Token counting is additive for whitespace separators, so the greedy sum
    equals the token count of the final concatenation.
    """
    query_tokens = count_tokens(query)
    if query_tokens > cfg.max_prompt_tokens:
        raise PromptBudgetError(
            f"query has {query_tokens} tokens, budget is {cfg.max_prompt_tokens}"
        )

    sep_tokens = count_tokens(cfg.separator)
    pieces = [_render_unit(u, cfg) for u in units_by_priority]
    piece_tokens = [count_tokens(p) for p in pieces]

    kept = len(pieces)
    total = query_tokens + sum(piece_tokens) + sep_tokens * len(pieces)
    while kept > 0 and total > cfg.max_prompt_tokens:
        kept -= 1
        total -= piece_tokens[kept] + sep_tokens

    kept_units = units_by_priority[:kept]
    prompt_text = cfg.separator.join([*reversed(pieces[:kept]), query])
    return PromptBundle(
        prompt_text=prompt_text,
        query_text=query,
        included_unit_ids=tuple(u.id for u in reversed(kept_units)),
        prompt_token_count=count_tokens(prompt_text),
        truncated=kept < len(pieces),
    )


def _render_unit(unit: RetrievalUnit, cfg: PromptConfig) -> str:
    if cfg.include_source_header:
        return f"// source: {unit.source_path}\n{unit.content}"
    return unit.content
