"""Lightweight C-family lexer.

Produces a code-token stream with source positions plus the comment and
preprocessor-directive side channels the corpus filters need. It is not a
compiler front-end: it only has to be right about where comments, string
literals, directives, braces, and identifiers are, and to degrade gracefully
on imperfect input (callers fall back to whole-file units).
"""

from __future__ import annotations

from dataclasses import dataclass

ID_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
ID_CONT = ID_START | set("0123456789")
DIGITS = set("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str  # "id" | "num" | "str" | "punct"
    text: str
    line: int  # 1-based
    col: int  # 0-based


@dataclass(frozen=True)
class Comment:
    text: str  # body without delimiters
    line: int


@dataclass(frozen=True)
class Directive:
    text: str  # full directive with continuations joined, leading '#' stripped
    start_line: int
    end_line: int


@dataclass
class LexResult:
    tokens: list[Token]
    comments: list[Comment]
    directives: list[Directive]
    ok: bool  # False when literals/comments were left unterminated


def lex(content: str) -> LexResult:
    tokens: list[Token] = []
    comments: list[Comment] = []
    directives: list[Directive] = []
    ok = True

    i = 0
    n = len(content)
    line = 1
    col = 0
    line_has_token = False  # directives only start at the head of a line

    def advance(k: int = 1) -> None:
        nonlocal i, line, col, line_has_token
        for _ in range(k):
            if i < n and content[i] == "\n":
                line += 1
                col = 0
                line_has_token = False
            else:
                col += 1
            i += 1

    while i < n:
        ch = content[i]

        if ch in " \t\r\v\f\n":
            advance()
            continue

        if ch == "#" and not line_has_token:
            start_line = line
            parts: list[str] = []
            advance()  # consume '#'
            while i < n:
                j = i
                while j < n and content[j] != "\n":
                    j += 1
                segment = content[i:j]
                continued = segment.rstrip().endswith("\\")
                parts.append(segment.rstrip().rstrip("\\") if continued else segment)
                advance(j - i)
                if i < n:
                    advance()  # newline
                if not continued:
                    break
            directives.append(Directive(" ".join(parts).strip(), start_line, line - 1 if col == 0 else line))
            continue

        if ch == "/" and i + 1 < n and content[i + 1] == "/":
            start_line = line
            j = i + 2
            while j < n and content[j] != "\n":
                j += 1
            comments.append(Comment(content[i + 2 : j], start_line))
            advance(j - i)
            line_has_token = True
            continue

        if ch == "/" and i + 1 < n and content[i + 1] == "*":
            start_line = line
            end = content.find("*/", i + 2)
            if end == -1:
                comments.append(Comment(content[i + 2 :], start_line))
                advance(n - i)
                ok = False
                continue
            comments.append(Comment(content[i + 2 : end], start_line))
            advance(end + 2 - i)
            line_has_token = True
            continue

        if ch in ID_START:
            j = i
            while j < n and content[j] in ID_CONT:
                j += 1
            word = content[i:j]
            # raw string literal: R"delim( ... )delim"
            if word.endswith("R") and j < n and content[j] == '"':
                k = j + 1
                while k < n and content[k] != "(":
                    k += 1
                delim = content[j + 1 : k]
                closer = ")" + delim + '"'
                end = content.find(closer, k)
                if end == -1:
                    tokens.append(Token("str", content[i:], line, col))
                    advance(n - i)
                    ok = False
                    continue
                tokens.append(Token("str", content[i : end + len(closer)], line, col))
                advance(end + len(closer) - i)
                line_has_token = True
                continue
            tokens.append(Token("id", word, line, col))
            advance(j - i)
            line_has_token = True
            continue

        if ch in DIGITS or (ch == "." and i + 1 < n and content[i + 1] in DIGITS):
            j = i
            while j < n and (content[j] in ID_CONT or content[j] == "." or
                             (content[j] in "+-" and content[j - 1] in "eEpP")):
                j += 1
            tokens.append(Token("num", content[i:j], line, col))
            advance(j - i)
            line_has_token = True
            continue

        if ch in "\"'":
            quote = ch
            start_line, start_col = line, col
            j = i + 1
            while j < n:
                if content[j] == "\\":
                    j += 2
                    continue
                if content[j] == quote:
                    j += 1
                    break
                if content[j] == "\n":  # unterminated on this line: tolerate
                    ok = False
                    break
                j += 1
            else:
                ok = False
            tokens.append(Token("str", content[i : min(j, n)], start_line, start_col))
            advance(min(j, n) - i)
            line_has_token = True
            continue

        # '::' is one token so scope resolution never looks like an
        # initializer-list colon to the segmenter.
        if ch == ":" and i + 1 < n and content[i + 1] == ":":
            tokens.append(Token("punct", "::", line, col))
            advance(2)
            line_has_token = True
            continue

        tokens.append(Token("punct", ch, line, col))
        advance()
        line_has_token = True

    return LexResult(tokens, comments, directives, ok)
