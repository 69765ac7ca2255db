"""Function-call extraction from code fragments.

Inputs are typically 20-line context windows, not full translation units, so
extraction is token-based and tolerant: an identifier directly followed by
'(' is a call unless it is a control keyword or it sits in declaration
position (preceded by a type-like identifier). Member and qualified calls
yield the unqualified name. Duplicate names keep the first occurrence.
"""

from __future__ import annotations

from ..corpus.lexer import lex
from .types import CallSite

_CONTROL_KEYWORDS = {
    "if", "for", "while", "switch", "catch", "sizeof", "alignof", "alignas",
    "decltype", "noexcept", "static_assert", "typeid", "return", "throw",
    "new", "delete",
}
# identifiers that may directly precede a call without making it a declaration
_PRECEDING_NON_TYPES = {
    "return", "throw", "new", "delete", "else", "do", "case", "in",
    "co_return", "co_await", "co_yield", "goto", "not", "and", "or",
}


def extract_calls(context_text: str) -> list[CallSite]:
    try:
        tokens = lex(context_text).tokens
    except Exception:
        return []

    calls: list[CallSite] = []
    seen: set[str] = set()
    for i, tok in enumerate(tokens):
        if tok.kind != "id" or tok.text in _CONTROL_KEYWORDS:
            continue
        if i + 1 >= len(tokens) or tokens[i + 1].text != "(":
            continue
        if _is_declaration_position(tokens, i):
            continue
        if tok.text not in seen:
            seen.add(tok.text)
            calls.append(CallSite(name=tok.text, line=tok.line, col=tok.col))
    return calls


def _is_declaration_position(tokens: list, name_idx: int) -> bool:
    """True when the name looks declared rather than called: `int foo(`,
    `Foo bar(`, or a qualified definition head `void Foo::bar(`."""
    j = name_idx
    # walk to the front of a qualified-id chain: a::b::name
    while j >= 2 and tokens[j - 1].text == "::" and tokens[j - 2].kind == "id":
        j -= 2
    if j == 0:
        return False
    prev = tokens[j - 1]
    if prev.kind != "id":
        return False
    return prev.text not in _PRECEDING_NON_TYPES
