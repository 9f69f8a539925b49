"""Optional ladder-level parallelism.

Ladder entries are independent pure computations, so they may be evaluated
by a small thread pool (BLAS releases the GIL).  The worker count comes
from the PRECONDLAB_WORKERS environment variable and defaults to 1, which
keeps runs strictly sequential.  Results are always assembled in input
order, so the worker count never affects output bytes.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

WORKERS_ENV_VAR = "PRECONDLAB_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}")
    return max(1, count)


def ladder_map(fn, items):
    """Map fn over items, in parallel when PRECONDLAB_WORKERS > 1."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
