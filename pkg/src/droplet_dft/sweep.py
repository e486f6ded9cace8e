"""Bounded-concurrency parameter sweeps.

Each item is evaluated in a worker thread; at most `max_concurrent` run at
once. Results come back in input order, so the output of a sweep does not
depend on how many threads ran it.
"""

import asyncio
import logging
import os
from collections.abc import Callable, Iterable
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def default_concurrency() -> int:
    return os.cpu_count() or 1


async def run_sweep(func: Callable[[T], R], items: Iterable[T], max_concurrent: int | None = None) -> list[R]:
    """Evaluate func over items with bounded concurrency, preserving order.

    Args:
        func: pure function of one item
        items: sweep points
        max_concurrent: maximum number of items evaluated in parallel
    """
    points = list(items)
    if not points:
        return []

    limit = max(1, max_concurrent or default_concurrency())
    semaphore = asyncio.Semaphore(limit)

    async def run_one(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    logger.debug("Sweeping %d points with up to %d workers", len(points), limit)
    return list(await asyncio.gather(*[run_one(item) for item in points]))
