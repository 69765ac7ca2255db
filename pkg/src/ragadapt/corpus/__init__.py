"""Corpus ingestion, segmentation, benchmark, and training-block packing."""

from .benchmark import candidate_count, make_benchmark
from .blocks import corpus_token_stream, pack_training_blocks
from .ingest import ingest
from .segment import segment, segment_corpus
from .store import (
    FORMAT_VERSION,
    load_benchmark,
    load_blocks,
    load_sources,
    load_units,
    read_header,
    write_benchmark,
    write_blocks,
    write_json,
    write_sources,
    write_units,
)
from .types import (
    CompletionInstance,
    FilterConfig,
    FilterReport,
    RetrievalUnit,
    SourceFile,
    TrainingBlock,
    normalized_content_hash,
)

__all__ = [
    "CompletionInstance",
    "FilterConfig",
    "FilterReport",
    "FORMAT_VERSION",
    "RetrievalUnit",
    "SourceFile",
    "TrainingBlock",
    "candidate_count",
    "corpus_token_stream",
    "ingest",
    "load_benchmark",
    "load_blocks",
    "load_sources",
    "load_units",
    "make_benchmark",
    "normalized_content_hash",
    "pack_training_blocks",
    "read_header",
    "segment",
    "segment_corpus",
    "write_benchmark",
    "write_blocks",
    "write_json",
    "write_sources",
    "write_units",
]
