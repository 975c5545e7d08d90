"""Execution strategies for the data-parallel parts of batch updates.

Both schedulers must produce identical results; the parallel one only
changes how independent tasks are executed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar, Union

__all__ = ["Scheduler", "SequentialScheduler", "ParallelScheduler", "get_scheduler"]

T = TypeVar("T")
R = TypeVar("R")


class Scheduler:
    name = "abstract"

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__}>"


class SequentialScheduler(Scheduler):
    name = "seq"

    def map(self, fn, items):
        return [fn(item) for item in items]


class ParallelScheduler(Scheduler):
    """Runs tasks on a thread pool. Each ``map`` call owns its pool, so nested calls cannot deadlock."""

    name = "par"

    def __init__(self, max_workers: int | None = 4):
        self.max_workers = max_workers

    def map(self, fn, items):
        items = list(items)
        if len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(fn, items))


def get_scheduler(which: Union[str, Scheduler, None]) -> Scheduler:
    if which is None:
        return SequentialScheduler()
    if isinstance(which, Scheduler):
        return which
    if which in ("seq", "sequential"):
        return SequentialScheduler()
    if which in ("par", "parallel"):
        return ParallelScheduler()
    raise ValueError(f"unknown scheduler {which!r}; expected 'seq' or 'par'")
