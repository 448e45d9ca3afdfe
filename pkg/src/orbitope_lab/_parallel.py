"""Deterministic thread fan-out for multi-start searches."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

THREADS_ENV = "ORBITOPE_LAB_THREADS"


def thread_cap(n_jobs: int | None = None) -> int:
    """Worker count: explicit ``n_jobs``, else the environment cap, else 1."""
    if n_jobs is None:
        raw = os.environ.get(THREADS_ENV, "")
        n_jobs = int(raw) if raw.strip() else 1
    return max(1, int(n_jobs))


def seed_streams(seed: int, n: int) -> list[np.random.Generator]:
    """``n`` independent generators; stream ``i`` depends only on ``(seed, i)``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def parallel_map(fn, items, n_jobs: int | None = None) -> list:
    """Ordered map; results never depend on the number of workers."""
    items = list(items)
    workers = min(thread_cap(n_jobs), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
