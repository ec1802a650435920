"""Deterministic fan-out of per-source work over a thread pool.

Sources are cut into a fixed number of contiguous blocks that depends only on
the node count, never on the worker count. Partial results are combined in
block order, so floating-point sums come out bit-identical for any ``n_jobs``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCKS = 64


def effective_jobs(n_jobs: int | None) -> int:
    """sklearn-style ``n_jobs``: None means 1, negative counts back from the CPU count."""
    if n_jobs is None or n_jobs == 0:
        return 1
    if n_jobs < 0:
        return max(1, (os.cpu_count() or 1) + 1 + n_jobs)
    return int(n_jobs)


def source_blocks(sources: np.ndarray) -> list[np.ndarray]:
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    if len(sources) == 0:
        return []
    return [b for b in np.array_split(sources, min(BLOCKS, len(sources))) if len(b)]


def map_blocks(func, blocks, n_jobs: int | None = None):
    """Yield ``func(block)`` for each block, in block order."""
    jobs = effective_jobs(n_jobs)
    if jobs == 1 or len(blocks) <= 1:
        for b in blocks:
            yield func(b)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(func, blocks)
