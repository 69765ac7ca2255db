"""Source-tree ingestion with quality filters.

Filter pipeline, applied per file in this order (a file is counted against
the first rule it trips):

  1. unreadable: I/O errors and non-UTF-8 bytes
  2. generated: a marker matches the path or the first lines of content
  3. comment_heavy: non-ASCII character ratio across comment text exceeds
     the configured cap (weeds out files whose comments are mostly written
     in a non-English script)
  4. long_define: any ``#define`` body longer than the configured cap
  5. duplicate: same normalized content hash as an already kept file; the
     lexicographically smallest path wins

Paths in the result are relative to the ingest root, POSIX style, so stores
built from them do not depend on where the tree was checked out.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path

from .lexer import lex
from .types import FilterConfig, FilterReport, SourceFile

log = logging.getLogger(__name__)

# generated-file banners live in the first few lines
_HEAD_LINES_FOR_MARKERS = 10


def ingest(root: str | Path, cfg: FilterConfig | None = None) -> tuple[list[SourceFile], FilterReport]:
    """Scan a source tree and return the files that pass all filters."""
    cfg = cfg or FilterConfig()
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"ingest root does not exist or is not a directory: {root}")

    kept = 0
    removed_duplicate = 0
    removed_generated = 0
    removed_comment_heavy = 0
    removed_long_define = 0
    removed_unreadable = 0

    files: list[SourceFile] = []
    seen_hashes: dict[int, str] = {}

    for rel_path, abs_path in _candidate_paths(root, cfg):
        try:
            content = abs_path.read_bytes().decode("utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            log.warning("skipping unreadable file %s: %s", rel_path, exc)
            removed_unreadable += 1
            continue

        if _looks_generated(rel_path, content, cfg):
            removed_generated += 1
            continue
        if _comment_nonascii_ratio(content) > cfg.max_nonascii_comment_ratio:
            removed_comment_heavy += 1
            continue
        if _has_long_define(content, cfg.max_define_body_chars):
            removed_long_define += 1
            continue

        file = SourceFile.from_content(rel_path, content)
        if file.content_hash in seen_hashes:
            # candidates arrive in sorted path order, so the kept file
            # already has the smallest path
            removed_duplicate += 1
            continue
        seen_hashes[file.content_hash] = rel_path
        files.append(file)
        kept += 1

    report = FilterReport(
        kept=kept,
        removed_duplicate=removed_duplicate,
        removed_generated=removed_generated,
        removed_comment_heavy=removed_comment_heavy,
        removed_long_define=removed_long_define,
        removed_unreadable=removed_unreadable,
    )
    return files, report


def _candidate_paths(root: Path, cfg: FilterConfig) -> list[tuple[str, Path]]:
    out = []
    for dirpath, _dirnames, filenames in os.walk(root):
        for name in filenames:
            abs_path = Path(dirpath) / name
            if abs_path.suffix.lower() not in cfg.source_extensions:
                continue
            out.append((abs_path.relative_to(root).as_posix(), abs_path))
    out.sort(key=lambda pair: pair[0])
    return out


def _looks_generated(rel_path: str, content: str, cfg: FilterConfig) -> bool:
    path_lower = rel_path.lower()
    head = "\n".join(content.split("\n", _HEAD_LINES_FOR_MARKERS)[:_HEAD_LINES_FOR_MARKERS]).lower()
    return any(marker in path_lower or marker in head for marker in cfg.generated_code_markers)


def _comment_nonascii_ratio(content: str) -> float:
    comments = lex(content).comments
    total = sum(len(c.text) for c in comments)
    if total == 0:
        return 0.0
    nonascii = sum(1 for c in comments for ch in c.text if ord(ch) > 127)
    return nonascii / total


def _has_long_define(content: str, max_body_chars: int) -> bool:
    for directive in lex(content).directives:
        body = _define_body(directive.text)
        if body is not None and len(body) > max_body_chars:
            return True
    return False


def _define_body(directive_text: str) -> str | None:
    """Macro body of a #define directive, continuations joined; None otherwise.

    Accepts the text with or without its leading '#' (the lexer strips it).
    """
    text = directive_text.lstrip()
    if text.startswith("#"):
        text = text[1:].lstrip()
    if not text.startswith("define"):
        return None
    rest = text[len("define") :]
    if rest and not rest[0].isspace():
        return None  # e.g. #defined_elsewhere
    rest = rest.lstrip()
    # skip the macro name
    i = 0
    while i < len(rest) and (rest[i].isalnum() or rest[i] == "_"):
        i += 1
    # function-like macro: parameters belong to the name, not the body
    if i < len(rest) and rest[i] == "(":
        depth = 0
        while i < len(rest):
            if rest[i] == "(":
                depth += 1
            elif rest[i] == ")":
                depth -= 1
                if depth == 0:
                    i += 1
                    break
            i += 1
    body = rest[i:].replace("\\\r\n", " ").replace("\\\n", " ")
    return body.strip()
