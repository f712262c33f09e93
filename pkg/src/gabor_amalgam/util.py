"""Small shared utilities."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Worker cap for parallel sections; GABOR_AMALGAM_THREADS overrides."""
    raw = os.environ.get("GABOR_AMALGAM_THREADS", "")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        k = os.cpu_count() or 1
    return max(1, min(k, 64))


def parallel_fill(indices, fn, min_chunk: int = 8):
    """Run fn(i) for every index, possibly on a thread pool.

    Each call writes into its own preallocated slot, so scheduling order
    cannot change the result.
    """
    workers = worker_count()
    items = list(indices)
    if workers <= 1 or len(items) < min_chunk:
        for i in items:
            fn(i)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fn, items))
