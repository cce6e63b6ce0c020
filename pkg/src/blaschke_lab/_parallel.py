"""Ordered fan-out of independent work items over a thread pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from .errors import DomainError

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "BLASCHKE_LAB_THREADS"


def thread_count() -> int:
    """Worker cap from ``BLASCHKE_LAB_THREADS``; unset or 0 means one per CPU."""
    raw = os.environ.get(ENV_THREADS, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError(f"{ENV_THREADS} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(x) for x in items]``, possibly concurrent; results keep input order."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
