"""Segmentation of C-family source files into retrieval units.

Extracted units, in source order:
  - top-level function definitions (including out-of-class member
    definitions like ``void Foo::bar() { ... }``),
  - top-level class/struct/union definitions (outermost-wins: a class is one
    unit spanning its inline methods).

Namespace and ``extern "C"`` blocks are transparent scopes. Files without any
function or class definition, and files the segmenter cannot make sense of,
become a single whole-file unit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..tokenizer import DEFAULT_TOKENIZER, CodeTokenizer
from .lexer import Token, lex
from .types import RetrievalUnit, SourceFile

log = logging.getLogger(__name__)

_CLASS_KEYWORDS = {"class", "struct", "union"}
_SKIP_STATEMENT_LEADS = {"typedef", "using", "enum"}
# identifiers that can sit directly before a '(' without naming a function
_NEVER_A_FUNCTION_NAME = {
    "if", "for", "while", "switch", "return", "sizeof", "catch", "throw",
    "noexcept", "alignas", "alignof", "decltype", "__attribute__", "__declspec",
    "int", "void", "char", "bool", "float", "double", "long", "short",
    "unsigned", "signed", "auto", "const",
} | _CLASS_KEYWORDS


@dataclass(frozen=True)
class _Span:
    kind: str  # "function" | "class"
    name: str | None
    start_line: int
    end_line: int


class _ParseGiveUp(Exception):
    """Structure too broken to segment; caller falls back to whole_file."""


def segment(
    file: SourceFile,
    id_start: int = 0,
    tokenizer: CodeTokenizer = DEFAULT_TOKENIZER,
) -> list[RetrievalUnit]:
    """Split one source file into retrieval units with sequential ids."""
    if file.line_count == 0:
        log.warning("empty file yields no units: %s", file.path)
        return []

    spans: list[_Span] | None
    try:
        result = lex(file.content)
        spans = _scan_spans(result.tokens)
    except _ParseGiveUp as exc:
        log.warning("segmentation fell back to whole_file for %s: %s", file.path, exc)
        spans = None

    if not spans:
        return [_make_unit(id_start, file, "whole_file", None, 1, file.line_count, tokenizer)]

    units = []
    for offset, span in enumerate(spans):
        units.append(
            _make_unit(id_start + offset, file, span.kind, span.name, span.start_line, span.end_line, tokenizer)
        )
    return units


def segment_corpus(
    files: list[SourceFile],
    tokenizer: CodeTokenizer = DEFAULT_TOKENIZER,
) -> list[RetrievalUnit]:
    """Segment a whole corpus with corpus-unique sequential unit ids.

    Files are processed in path order so ids are deterministic regardless of
    any parallel execution upstream.
    """
    units: list[RetrievalUnit] = []
    for file in sorted(files, key=lambda f: f.path):
        units.extend(segment(file, id_start=len(units), tokenizer=tokenizer))
    return units


def _make_unit(
    unit_id: int,
    file: SourceFile,
    kind: str,
    name: str | None,
    start_line: int,
    end_line: int,
    tokenizer: CodeTokenizer,
) -> RetrievalUnit:
    if kind == "whole_file":
        content = file.content
    else:
        content = "\n".join(file.lines()[start_line - 1 : end_line])
    return RetrievalUnit(
        id=unit_id,
        source_path=file.path,
        kind=kind,
        name=name,
        start_line=start_line,
        end_line=end_line,
        content=content,
        token_count=tokenizer.count(content),
    )


def _scan_spans(tokens: list[Token]) -> list[_Span]:
    spans: list[_Span] = []
    i = 0
    n = len(tokens)
    stmt_start: int | None = None
    paren_depth = 0
    transparent_depth = 0

    while i < n:
        tok = tokens[i]

        if stmt_start is None:
            if tok.kind == "punct" and tok.text == "}":
                if transparent_depth == 0:
                    raise _ParseGiveUp(f"unmatched '}}' at line {tok.line}")
                transparent_depth -= 1
                i += 1
                continue
            stmt_start = i
            paren_depth = 0

        if tok.kind == "punct":
            if tok.text in "([":
                paren_depth += 1
            elif tok.text in ")]":
                paren_depth -= 1
                if paren_depth < 0:
                    raise _ParseGiveUp(f"unbalanced parentheses at line {tok.line}")
            elif tok.text == ";" and paren_depth == 0:
                stmt_start = None
                i += 1
                continue
            elif tok.text == "{":
                if paren_depth > 0:
                    # lambda body or braced argument inside a call
                    i = _match_brace(tokens, i) + 1
                    continue

                stmt = tokens[stmt_start:i]
                if _is_transparent_block(stmt):
                    transparent_depth += 1
                    stmt_start = None
                    i += 1
                    continue

                aggregate_init = bool(stmt) and stmt[-1].kind == "punct" and stmt[-1].text == "="
                name = None if aggregate_init else _function_name(stmt)
                if name is not None:
                    end = _consume_function(tokens, stmt, i)
                    spans.append(_Span("function", name, tokens[stmt_start].line, tokens[end].line))
                    i = end + 1
                    stmt_start = None
                    continue

                if not aggregate_init and _is_class_statement(stmt):
                    close = _match_brace(tokens, i)
                    end = _consume_to_semicolon(tokens, close + 1)
                    spans.append(
                        _Span("class", _class_name(stmt), tokens[stmt_start].line, tokens[end].line)
                    )
                    i = end + 1
                    stmt_start = None
                    continue

                # aggregate initializer, control-flow block, or other
                # unrecognized construct: swallow the group and start a fresh
                # statement so its inner tokens never leak into the next scan
                i = _match_brace(tokens, i) + 1
                stmt_start = None
                continue

        i += 1

    if transparent_depth != 0:
        raise _ParseGiveUp("unclosed namespace or linkage block")
    return spans


def _is_transparent_block(stmt: list[Token]) -> bool:
    if not stmt:
        return True  # bare top-level block
    if stmt[0].text == "namespace":
        return not any(t.kind == "punct" and t.text == "(" for t in stmt)
    if stmt[0].text == "extern" and len(stmt) == 2 and stmt[1].kind == "str":
        return True
    return False


def _top_level_paren_closes(stmt: list[Token]) -> list[int]:
    depth = 0
    closes: list[int] = []
    for idx, tok in enumerate(stmt):
        if tok.kind != "punct":
            continue
        if tok.text in "([":
            depth += 1
        elif tok.text in ")]":
            depth -= 1
            if depth == 0 and tok.text == ")":
                closes.append(idx)
            if depth < 0:
                raise _ParseGiveUp(f"unbalanced parentheses at line {tok.line}")
    return closes if depth == 0 else []


def _function_name(stmt: list[Token]) -> str | None:
    """Name of the function a statement defines, or None.

    Paren groups are tried right to left so trailing ``noexcept(...)``,
    attribute, or old-style ``throw()`` groups do not shadow the parameter
    list.
    """
    if not stmt or stmt[0].text in _SKIP_STATEMENT_LEADS:
        return None
    stmt = _before_init_list(stmt)
    for close in reversed(_top_level_paren_closes(stmt)):
        name = _name_before_group(stmt, close)
        if name is not None:
            return name
    return None


def _before_init_list(stmt: list[Token]) -> list[Token]:
    """Statement prefix before a member-initializer list's ':'.

    Keeps constructor init groups like ``: x_(x), y_(y)`` from shadowing the
    parameter list during the right-to-left name search.
    """
    depth = 0
    for idx, tok in enumerate(stmt):
        if tok.kind != "punct":
            continue
        if tok.text in "([":
            depth += 1
        elif tok.text in ")]":
            depth -= 1
        elif tok.text == ":" and depth == 0:
            return stmt[:idx]
    return stmt


def _name_before_group(stmt: list[Token], paren_close: int) -> str | None:
    open_idx = _matching_open(stmt, paren_close)
    if open_idx is None or open_idx == 0:
        return None
    j = open_idx - 1
    parts: list[str] = []
    if stmt[j].kind == "punct" and stmt[j].text not in (")", "]"):
        # operator token may span several punct chars (==, +=, <<, ...)
        ops: list[str] = []
        while j > 0 and stmt[j].kind == "punct":
            ops.append(stmt[j].text)
            j -= 1
        if stmt[j].text != "operator":
            return None
        parts.append("operator" + "".join(reversed(ops)))
        j -= 1
    elif stmt[j].kind == "id":
        if stmt[j].text in _NEVER_A_FUNCTION_NAME:
            return None
        name = stmt[j].text
        if j > 0 and stmt[j - 1].text == "~":
            name = "~" + name
            j -= 1
        parts.append(name)
        j -= 1
    else:
        return None
    while j >= 1 and stmt[j].text == "::" and stmt[j - 1].kind == "id":
        parts.append(stmt[j - 1].text)
        j -= 2
    return "::".join(reversed(parts))


def _matching_open(stmt: list[Token], close_idx: int) -> int | None:
    depth = 0
    for idx in range(close_idx, -1, -1):
        tok = stmt[idx]
        if tok.kind != "punct":
            continue
        if tok.text in ")]":
            depth += 1
        elif tok.text in "([":
            depth -= 1
            if depth == 0:
                return idx if tok.text == "(" else None
    return None


def _is_class_statement(stmt: list[Token]) -> bool:
    if not stmt or stmt[0].text in _SKIP_STATEMENT_LEADS:
        return False
    for tok in stmt:
        if tok.kind != "id":
            continue
        if tok.text == "enum":
            return False
        if tok.text in _CLASS_KEYWORDS:
            return True
    return False


def _class_name(stmt: list[Token]) -> str | None:
    kw_idx = next(
        (i for i, t in enumerate(stmt) if t.kind == "id" and t.text in _CLASS_KEYWORDS), None
    )
    if kw_idx is None:
        return None
    name = None
    depth = 0
    for tok in stmt[kw_idx + 1 :]:
        if tok.kind == "punct":
            if tok.text in "([<":
                depth += 1
            elif tok.text in ")]>":
                depth -= 1
            elif tok.text == ":" and depth <= 0:
                break  # base clause
            continue
        if tok.kind == "id" and depth <= 0 and tok.text != "final":
            name = tok.text
    return name


def _consume_function(tokens: list[Token], stmt: list[Token], first_brace: int) -> int:
    """Return the index of the '}' closing the function body.

    Handles member-initializer lists, where ``Foo() : x_{1}, y_(2) { ... }``
    puts brace groups before the body: inside an initializer list a '{'
    directly preceded by an identifier or '>' opens an initializer, anything
    else opens the body.
    """
    closes = _top_level_paren_closes(stmt)
    in_init_list = bool(closes) and any(
        t.kind == "punct" and t.text == ":" for t in stmt[closes[-1] + 1 :]
    )

    i = first_brace
    while True:
        if not in_init_list:
            return _match_brace(tokens, i)
        prev = tokens[i - 1]
        if prev.kind == "id" or prev.text == ">":
            i = _match_brace(tokens, i) + 1  # initializer group
            i = _skip_to_next_brace(tokens, i)
        else:
            return _match_brace(tokens, i)


def _skip_to_next_brace(tokens: list[Token], i: int) -> int:
    depth = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "punct":
            if tok.text in "([":
                depth += 1
            elif tok.text in ")]":
                depth -= 1
            elif tok.text == "{" and depth == 0:
                return i
        i += 1
    raise _ParseGiveUp("initializer list never reaches a function body")


def _match_brace(tokens: list[Token], open_idx: int) -> int:
    depth = 0
    for idx in range(open_idx, len(tokens)):
        tok = tokens[idx]
        if tok.kind != "punct":
            continue
        if tok.text == "{":
            depth += 1
        elif tok.text == "}":
            depth -= 1
            if depth == 0:
                return idx
    raise _ParseGiveUp(f"unclosed brace opened at line {tokens[open_idx].line}")


def _consume_to_semicolon(tokens: list[Token], i: int) -> int:
    """Index of the ';' ending a class declarator list (or the last body token)."""
    depth = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "punct":
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return i
        i += 1
    return i - 1
