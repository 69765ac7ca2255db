"""Fixed-length training-block packing for fine-tuning data preparation.

Files are tokenized and concatenated in path order into one stream, which is
cut into consecutive non-overlapping blocks of exactly L tokens. A trailing
remainder shorter than L is dropped so every block has uniform length.
"""

from __future__ import annotations

from ..tokenizer import DEFAULT_TOKENIZER, CodeTokenizer
from .types import SourceFile, TrainingBlock


def pack_training_blocks(
    files: list[SourceFile],
    block_len: int = 4096,
    tokenizer: CodeTokenizer = DEFAULT_TOKENIZER,
) -> list[TrainingBlock]:
    """Pack the corpus token stream into blocks of exactly ``block_len``."""
    if block_len < 2:
        raise ValueError(f"block_len must be >= 2, got {block_len}")

    stream: list[int] = []
    for file in sorted(files, key=lambda f: f.path):
        stream.extend(tokenizer.encode(file.content))

    blocks = []
    for j in range(len(stream) // block_len):
        start = j * block_len
        end = start + block_len
        blocks.append(TrainingBlock(tokens=tuple(stream[start:end]), origin=(start, end)))
    return blocks


def corpus_token_stream(
    files: list[SourceFile],
    tokenizer: CodeTokenizer = DEFAULT_TOKENIZER,
) -> list[int]:
    """The concatenated token stream the blocks are cut from."""
    stream: list[int] = []
    for file in sorted(files, key=lambda f: f.path):
        stream.extend(tokenizer.encode(file.content))
    return stream
