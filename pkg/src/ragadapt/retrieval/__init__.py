"""Retrieval backends: BM25 lexical, exact vector, dependency, random."""

from .calls import extract_calls
from .lexical import LexicalIndex, bm25_score, build_lexical_index, lexical_topk, tokenize_for_index
from .persist import load_lexical_symbols, load_vectors, save_lexical_symbols, save_vectors
from .random_baseline import random_retrieve
from .symbols import DependencyRetrieval, SymbolIndex, build_symbol_index, dependency_retrieve
from .types import STRATEGIES, CallSite, EmbeddingVector, RetrievalConfig, RetrievalResult, check_result_list
from .vector import VectorIndex, build_vector_index, cosine_sim, vector_topk

__all__ = [
    "CallSite",
    "DependencyRetrieval",
    "EmbeddingVector",
    "LexicalIndex",
    "RetrievalConfig",
    "RetrievalResult",
    "STRATEGIES",
    "SymbolIndex",
    "VectorIndex",
    "bm25_score",
    "build_lexical_index",
    "build_symbol_index",
    "build_vector_index",
    "check_result_list",
    "cosine_sim",
    "dependency_retrieve",
    "extract_calls",
    "lexical_topk",
    "load_lexical_symbols",
    "load_vectors",
    "random_retrieve",
    "save_lexical_symbols",
    "save_vectors",
    "tokenize_for_index",
    "vector_topk",
]
