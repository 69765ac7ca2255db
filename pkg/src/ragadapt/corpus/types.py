"""Domain types for corpus ingestion, segmentation, benchmarks, and training blocks."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

_WS_RE = re.compile(r"\s+")

#: Markers that flag auto-generated framework code, matched against the
#: relative path (case-insensitive) and the first 2048 content characters.
DEFAULT_GENERATED_MARKERS = (
    "generated",
    ".pb.",
    "do not edit",
    "autogenerated",
    "auto-generated",
)

DEFAULT_SOURCE_EXTENSIONS = (".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp", ".hxx")


def normalized_content_hash(content: str) -> int:
    """63-bit hash of whitespace-normalized content (all runs -> one space)."""
    normalized = _WS_RE.sub(" ", content).strip()
    digest = hashlib.blake2b(normalized.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass(frozen=True)
class SourceFile:
    path: str
    content: str
    line_count: int
    token_count: int
    content_hash: int

    @staticmethod
    def from_content(path: str, content: str, token_count: int | None = None) -> "SourceFile":
        if token_count is None:
            from ..tokenizer import DEFAULT_TOKENIZER

            token_count = DEFAULT_TOKENIZER.count(content)
        return SourceFile(
            path=path,
            content=content,
            line_count=len(content.splitlines()),
            token_count=token_count,
            content_hash=normalized_content_hash(content),
        )

    def lines(self) -> list[str]:
        return self.content.splitlines()


@dataclass(frozen=True)
class FilterConfig:
    max_define_body_chars: int = 512
    max_nonascii_comment_ratio: float = 0.3
    generated_code_markers: tuple[str, ...] = DEFAULT_GENERATED_MARKERS
    source_extensions: tuple[str, ...] = DEFAULT_SOURCE_EXTENSIONS

    def __post_init__(self) -> None:
        if self.max_define_body_chars <= 0:
            raise ValueError("max_define_body_chars must be strictly positive")
        if not 0.0 <= self.max_nonascii_comment_ratio <= 1.0:
            raise ValueError("max_nonascii_comment_ratio must lie in [0, 1]")


@dataclass
class FilterReport:
    kept: int = 0
    removed_duplicate: int = 0
    removed_generated: int = 0
    removed_comment_heavy: int = 0
    removed_long_define: int = 0
    removed_unreadable: int = 0

    @property
    def total_scanned(self) -> int:
        return (
            self.kept
            + self.removed_duplicate
            + self.removed_generated
            + self.removed_comment_heavy
            + self.removed_long_define
            + self.removed_unreadable
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "kept": self.kept,
            "removed_duplicate": self.removed_duplicate,
            "removed_generated": self.removed_generated,
            "removed_comment_heavy": self.removed_comment_heavy,
            "removed_long_define": self.removed_long_define,
            "removed_unreadable": self.removed_unreadable,
        }


UNIT_KINDS = ("function", "class", "whole_file")


@dataclass(frozen=True)
class RetrievalUnit:
    """One indexable chunk: a function, a class, or a whole file."""

    id: int
    source_path: str
    kind: str
    name: str | None
    start_line: int  # 1-based inclusive
    end_line: int  # 1-based inclusive
    content: str
    token_count: int

    def __post_init__(self) -> None:
        if self.kind not in UNIT_KINDS:
            raise ValueError(f"unknown unit kind: {self.kind!r}")
        if not 1 <= self.start_line <= self.end_line:
            raise ValueError("unit line span must satisfy 1 <= start_line <= end_line")


@dataclass(frozen=True)
class CompletionInstance:
    """A fixed-size line context paired with its ground-truth next line."""

    id: int
    source_path: str
    context: str
    target: str
    context_token_count: int


@dataclass(frozen=True)
class TrainingBlock:
    """Fixed-length slice of the corpus token stream (token-offset provenance)."""

    tokens: tuple[int, ...]
    origin: tuple[int, int] = field(default=(0, 0))  # [start_token, end_token)
