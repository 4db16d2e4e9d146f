"""Bounded thread-pool mapping with order-preserving results."""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """Resolve a thread count; ``None`` reads GENBOUND_THREADS, 0 means auto."""
    if threads is None:
        threads = int(os.getenv("GENBOUND_THREADS", "0"))
    if threads < 0:
        raise ValueError("thread count must be >= 0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def parallel_map(func: Callable[[T], R], items: Iterable[T],
                 threads: Optional[int] = None) -> List[R]:
    """Apply ``func`` to every item, returning results in input order.

    Each task must be a pure function of its item (randomness derived from
    the item itself), so the output does not depend on ``threads``.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
