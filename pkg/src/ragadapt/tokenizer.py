"""Deterministic code tokenizer shared by corpus stores, prompts, and metrics.

Three token classes: identifiers, integer/decimal numbers, and single
punctuation characters. Whitespace is discarded, so token counts are additive
across newline-separated concatenation.
"""

from __future__ import annotations

import hashlib
import re

TOKENIZER_ID = "code-v1"

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+(?:\.[0-9]+)?|[^\w\s]")


class CodeTokenizer:
    """Splits source text into identifier / number / punctuation tokens.

    Token ids are stable 63-bit hashes of the token string, so encoding is
    stateless and identical across processes (no PYTHONHASHSEED dependence).
    """

    tokenizer_id = TOKENIZER_ID

    def tokenize(self, text: str) -> list[str]:
        return _TOKEN_RE.findall(text)

    def count(self, text: str) -> int:
        return len(self.tokenize(text))

    def token_id(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") >> 1

    def encode(self, text: str) -> list[int]:
        return [self.token_id(t) for t in self.tokenize(text)]

    def clip(self, text: str, max_tokens: int) -> str:
        """Prefix of text containing at most max_tokens tokens."""
        if max_tokens <= 0:
            return ""
        end = 0
        for i, match in enumerate(_TOKEN_RE.finditer(text)):
            if i == max_tokens:
                return text[:end]
            end = match.end()
        return text


DEFAULT_TOKENIZER = CodeTokenizer()
