"""Order-preserving request batching for the inference queue."""

from __future__ import annotations

from typing import Sequence, TypeVar

T = TypeVar("T")


def batch_schedule(items: Sequence[T], batch_size: int) -> list[list[T]]:
    """Split items into consecutive chunks of at most batch_size.

    Concatenating the chunks reproduces the input exactly, so per-item
    results routed back chunk by chunk keep their original order.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    return [list(items[i : i + batch_size]) for i in range(0, len(items), batch_size)]
