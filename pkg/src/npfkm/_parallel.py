"""Order-preserving fan-out of per-series work onto a process pool."""

import os
from concurrent.futures import ProcessPoolExecutor

THREADS_ENV = "NPFKM_THREADS"


def resolve_threads(threads=None):
    """Explicit value first, then ``$NPFKM_THREADS``, then 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 1
    threads = int(threads)
    if threads == -1:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"thread count must be positive or -1, got {threads}")
    return threads


def ordered_map(func, items, threads=1):
    """``[func(x) for x in items]``, optionally computed by worker processes.

    Results always come back in input order, so the output never depends
    on the worker count.
    """
    items = list(items)
    threads = resolve_threads(threads)
    if threads == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
