"""Order-preserving data-parallel map used by every sweep."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import ValidationError

WORKERS_ENV = "SPINROT_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return value


def pmap(func, items, workers: int | None = None, chunksize: int = 1) -> list:
    """``[func(x) for x in items]``, optionally spread over processes.

    Results always come back in input order, so output never depends on the
    worker count. ``func`` must be picklable (a module-level function or a
    ``functools.partial`` of one).
    """
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
