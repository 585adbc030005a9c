"""Deterministic partitioning of scan work across a worker pool.

Results must never depend on the worker count, so callers split work into
index chunks, run the chunks (possibly concurrently), and merge with an
order-independent reduction such as "minimum canonical index".
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def partition_range(count: int, workers: int) -> list[range]:
    workers = max(1, min(workers, count)) if count else 1
    step = -(-count // workers)
    return [range(lo, min(lo + step, count)) for lo in range(0, count, step)]


def map_chunks(chunks: Sequence[range], fn: Callable[[range], T], workers: int) -> list[T]:
    """Apply fn to each chunk; results come back in chunk order."""
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
