"""Index-aligned process-pool map with a sequential reference path."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "AAGHH_WORKERS"


class TaskError(RuntimeError):
    def __init__(self, index: int, exc: BaseException):
        super().__init__(f"task {index} failed: {exc!r}")
        self.index = index


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return workers


def parallel_map(fn: Callable[[T], R], tasks: Iterable[T], workers: int | None = 1) -> list[R]:
    """``[fn(t) for t in tasks]``, optionally spread over worker processes.

    ``fn`` and the tasks must be picklable when ``workers > 1``.  Tasks must
    carry their own randomness (seeds), so results do not depend on
    ``workers``.
    """
    tasks = list(tasks)
    workers = resolve_workers(workers)
    out: list[R] = []
    if workers == 1 or len(tasks) <= 1:
        for i, t in enumerate(tasks):
            try:
                out.append(fn(t))
            except Exception as exc:
                raise TaskError(i, exc) from exc
        return out
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        it = pool.map(fn, tasks, chunksize=chunk)
        for i in range(len(tasks)):
            try:
                out.append(next(it))
            except Exception as exc:
                raise TaskError(i, exc) from exc
    return out
