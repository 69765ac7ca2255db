"""BM25 lexical retrieval over code treated as text.

Okapi BM25 with the non-negative IDF variant:

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
    score(q, d) = sum over query terms of idf(t) * tf * (k1 + 1)
                  / (tf + k1 * (1 - b + b * dl / avgdl))

Terms repeated in the query contribute once per occurrence.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass

from .types import RetrievalResult

log = logging.getLogger(__name__)

_TERM_RE = re.compile(r"[a-z0-9]+")


def tokenize_for_index(text: str) -> list[str]:
    """Lowercased alphanumeric runs; everything else is a boundary."""
    return _TERM_RE.findall(text.lower())


@dataclass
class LexicalIndex:
    doc_count: int
    avg_doc_len: float
    # term -> [(unit_id, term_frequency)] sorted by unit_id
    postings: dict[str, list[tuple[int, int]]]
    doc_len: dict[int, int]
    k1: float = 1.2
    b: float = 0.75

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))

    def _tf_part(self, tf: int, dl: int) -> float:
        rel_len = dl / self.avg_doc_len if self.avg_doc_len > 0 else 0.0
        return tf * (self.k1 + 1.0) / (tf + self.k1 * (1.0 - self.b + self.b * rel_len))


def build_lexical_index(
    docs: dict[int, str] | list[tuple[int, str]],
    k1: float = 1.2,
    b: float = 0.75,
) -> LexicalIndex:
    """Index unit_id -> text pairs. Rebuilding on identical input is identical."""
    pairs = list(docs.items()) if isinstance(docs, dict) else list(docs)
    if not pairs:
        raise ValueError("cannot build a lexical index from zero documents")
    ids = [uid for uid, _ in pairs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate unit ids in lexical index input")

    postings: dict[str, list[tuple[int, int]]] = {}
    doc_len: dict[int, int] = {}
    for uid, text in sorted(pairs):
        terms = tokenize_for_index(text)
        doc_len[uid] = len(terms)
        for term, tf in sorted(Counter(terms).items()):
            postings.setdefault(term, []).append((uid, tf))

    avg_doc_len = sum(doc_len.values()) / len(doc_len)
    return LexicalIndex(
        doc_count=len(doc_len),
        avg_doc_len=avg_doc_len,
        postings=postings,
        doc_len=doc_len,
        k1=k1,
        b=b,
    )


def bm25_score(index: LexicalIndex, query_terms: list[str], unit_id: int) -> float:
    if unit_id not in index.doc_len:
        raise KeyError(f"unknown unit_id {unit_id}")
    dl = index.doc_len[unit_id]
    score = 0.0
    for term in query_terms:
        tf = _term_frequency(index, term, unit_id)
        if tf == 0:
            continue
        score += index.idf(term) * index._tf_part(tf, dl)
    return score


def lexical_topk(index: LexicalIndex, query_text: str, k: int) -> list[RetrievalResult]:
    """Top-k documents by BM25, ties broken by ascending unit_id.

    Matches brute-force scoring of every document, so zero-score documents
    can fill out the tail when k exceeds the number of matches.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k > index.doc_count:
        log.warning("k=%d exceeds index size %d; returning all documents", k, index.doc_count)
        k = index.doc_count
    if k == 0:
        return []

    scores = {uid: 0.0 for uid in index.doc_len}
    for term in tokenize_for_index(query_text):
        idf = index.idf(term)
        for uid, tf in index.postings.get(term, ()):
            scores[uid] += idf * index._tf_part(tf, index.doc_len[uid])

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:k]
    return [RetrievalResult(unit_id=uid, score=score, rank=i + 1) for i, (uid, score) in enumerate(ranked)]


def _term_frequency(index: LexicalIndex, term: str, unit_id: int) -> int:
    for uid, tf in index.postings.get(term, ()):
        if uid == unit_id:
            return tf
    return 0
