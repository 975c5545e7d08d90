"""Fully dynamic sparsifier via binary-counter batching.

Live edges are partitioned into sub-hypergraphs ``H_1..H_K`` with
``|H_i| <= 2**i``.  Each non-empty ``H_i`` is owned by a
:class:`DecrementalSparsifier`; an insertion merges the lower levels into
one level ``j`` chosen by the insertion counter and rebuilds it.  The output
is the union of the per-level sparsifiers.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .decremental import DecrementalSparsifier, RecourseReport, UnknownEdgeError
from .hypergraph import Hyperedge, Hypergraph
from .sampling import derive_key
from .scheduler import Scheduler, get_scheduler
from .static import SparsifyConfig

__all__ = [
    "CapacityError",
    "UpdateMetrics",
    "DynamicStats",
    "DynamicSparsifier",
    "new_dynamic",
    "counter_level",
    "batch_level",
]


class CapacityError(ValueError):
    pass


def counter_level(t: int) -> int:
    """``max{i : 2**(i-1) divides t}`` for ``t >= 1``."""
    if t < 1:
        raise ValueError("counter must be positive")
    return (t & -t).bit_length()


def batch_level(t_old: int, t_new: int) -> int:
    """1-based position of the highest bit that differs between two counter values."""
    return (t_old ^ t_new).bit_length()


@dataclass
class UpdateMetrics:
    kind: str
    level_rebuilt: Optional[int] = None
    edges_moved: int = 0
    recourse: Optional[RecourseReport] = None
    wall_time: float = 0.0


@dataclass
class DynamicStats:
    updates: int
    adds: int
    deletes: int
    rebuilds: list[int]
    edges_moved: int
    recourse_total: int
    wall_time: float
    live_m: int
    sparsifier_size: int

    @property
    def amortized_us(self) -> float:
        return 1e6 * self.wall_time / self.updates if self.updates else 0.0


class DynamicSparsifier:
    """Maintains a sparsifier of a hypergraph with at most ``max_m`` live edges.

    ``cfg.seed`` is the root seed; the engine rebuilt when the counter
    reaches ``t`` is seeded with ``derive_key(seed, "rebuild", t)``.
    """

    def __init__(
        self,
        n: int,
        max_m: int,
        cfg: Optional[SparsifyConfig] = None,
        scheduler: Scheduler | str | None = None,
    ):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        if max_m < 1:
            raise ValueError(f"capacity must be >= 1, got {max_m}")
        self.n = n
        self.max_m = max_m
        self.cfg = cfg or SparsifyConfig()
        self.scheduler = get_scheduler(scheduler)
        self.K = math.ceil(math.log2(max_m)) + 1
        # index 0 unused so that subs[i] is H_i
        self.subs: list[dict[int, Hyperedge]] = [{} for _ in range(self.K + 1)]
        self.engines: list[Optional[DecrementalSparsifier]] = [None] * (self.K + 1)
        self.owner: dict[int, int] = {}
        self.t = 0
        self.i_last = 1
        self.next_id = 0
        self.rebuilds = [0] * (self.K + 1)
        self._adds = 0
        self._deletes = 0
        self._moved = 0
        self._recourse = 0
        self._time = 0.0
        self.last_metrics: Optional[UpdateMetrics] = None

    def __repr__(self) -> str:
        sizes = [len(s) for s in self.subs[1:]]
        return f"DynamicSparsifier(n={self.n}, live={len(self.owner)}, t={self.t}, levels={sizes})"

    @property
    def live_count(self) -> int:
        return len(self.owner)

    def __contains__(self, eid: int) -> bool:
        return eid in self.owner

    def live_edges(self) -> Hypergraph:
        return Hypergraph(self.n, (e for s in self.subs for e in s.values()))

    def add(self, tail: Iterable[int], head: Iterable[int], weight: float) -> int:
        return self.add_batch([(tail, head, weight)])[0]

    def add_batch(self, specs: Sequence[tuple[Iterable[int], Iterable[int], float]]) -> list[int]:
        """Insert edges with one rebuild; returns their ids in input order.

        The counter advances by the batch size.  The target level is the
        highest counter bit that changed, raised until it can hold everything
        merged into it.  A batch of one is exactly :meth:`add`.
        """
        start = time.perf_counter()
        specs = list(specs)
        if not specs:
            return []
        if len(self.owner) + len(specs) > self.max_m:
            raise CapacityError(
                f"inserting {len(specs)} edges exceeds capacity {self.max_m} "
                f"({len(self.owner)} live)"
            )
        new_edges = []
        for offset, (tail, head, weight) in enumerate(specs):
            e = Hyperedge(self.next_id + offset, tail, head, weight)
            if e.tail[-1] >= self.n or e.head[-1] >= self.n:
                raise ValueError(f"edge references a vertex outside [0, {self.n})")
            new_edges.append(e)
        self.next_id += len(specs)

        t_old, self.t = self.t, self.t + len(specs)
        j = min(batch_level(t_old, self.t), self.K)
        below = sum(len(self.subs[i]) for i in range(1, j))
        while j < self.K and (1 << j) < below + len(specs) + len(self.subs[j]):
            below += len(self.subs[j])
            j += 1
        self.i_last = max(self.i_last, j)

        target = self.subs[j]
        moved = 0
        for i in range(1, j):
            for eid, e in self.subs[i].items():
                target[eid] = e
                self.owner[eid] = j
            moved += len(self.subs[i])
            self.subs[i] = {}
            self.engines[i] = None
        for e in new_edges:
            target[e.id] = e
            self.owner[e.id] = j
        self.engines[j] = DecrementalSparsifier(
            Hypergraph(self.n, target.values()),
            self.cfg.with_seed(derive_key(self.cfg.seed, "rebuild", self.t)),
        )
        self.rebuilds[j] += 1
        self._moved += moved
        self._adds += len(specs)
        elapsed = time.perf_counter() - start
        self._time += elapsed
        self.last_metrics = UpdateMetrics("add", j, moved, None, elapsed)
        return [e.id for e in new_edges]

    def delete(self, e: int) -> UpdateMetrics:
        start = time.perf_counter()
        j = self.owner.get(e)
        if j is None:
            raise UnknownEdgeError(f"edge {e} is not live")
        report = self.engines[j].delete(e)
        self._forget(j, [e])
        return self._finish_delete(report, 1, start)

    def delete_batch(self, ids: Iterable[int]) -> UpdateMetrics:
        """Delete several edges; each owning level gets its share as one batch.

        Equivalent to deleting the ids one by one in ascending order.  The
        per-level batches touch disjoint state and run on the scheduler.
        """
        start = time.perf_counter()
        ids = list(ids)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate ids in delete batch")
        by_level: dict[int, list[int]] = {}
        for eid in ids:
            j = self.owner.get(eid)
            if j is None:
                raise UnknownEdgeError(f"edge {eid} is not live")
            by_level.setdefault(j, []).append(eid)
        # engines already run level-parallel here, keep their inner work sequential
        reports = self.scheduler.map(
            lambda item: self.engines[item[0]].delete_batch(item[1], "seq"),
            sorted(by_level.items()),
        )
        report = RecourseReport()
        for r in reports:
            report = report.merge(r)
        for j, group in by_level.items():
            self._forget(j, group)
        return self._finish_delete(report, len(ids), start)

    def apply_batch(self, adds: Sequence, deletes: Sequence[int]) -> list[int]:
        """Mixed batch: deletions first, then insertions."""
        if deletes:
            self.delete_batch(deletes)
        return self.add_batch(adds) if adds else []

    def _forget(self, j: int, ids: list[int]) -> None:
        sub = self.subs[j]
        for eid in ids:
            del sub[eid]
            del self.owner[eid]
        if not sub:
            self.engines[j] = None

    def _finish_delete(self, report: RecourseReport, count: int, start: float) -> UpdateMetrics:
        self._deletes += count
        self._recourse += report.recourse
        elapsed = time.perf_counter() - start
        self._time += elapsed
        self.last_metrics = UpdateMetrics("delete", None, 0, report, elapsed)
        return self.last_metrics

    def level_parts(self) -> list[tuple[int, set[int]]]:
        """Id sets making up each level's sparsifier, ``(level, ids)`` pairs."""
        out = []
        for i in range(1, self.K + 1):
            eng = self.engines[i]
            if eng is not None:
                for _, ids in eng.parts():
                    out.append((i, ids))
        return out

    def level_sparsifier(self, i: int) -> Hypergraph:
        eng = self.engines[i]
        return Hypergraph(self.n, () if eng is None else eng.sparsifier_edges())

    def output_sparsifier(self) -> Hypergraph:
        edges = []
        for i in range(1, self.K + 1):
            if self.engines[i] is not None:
                edges.extend(self.engines[i].sparsifier_edges())
        return Hypergraph(self.n, edges)

    def sparsifier_size(self) -> int:
        return sum(eng.sparsifier_size() for eng in self.engines if eng is not None)

    def stats(self) -> DynamicStats:
        return DynamicStats(
            updates=self._adds + self._deletes,
            adds=self._adds,
            deletes=self._deletes,
            rebuilds=self.rebuilds[1:],
            edges_moved=self._moved,
            recourse_total=self._recourse,
            wall_time=self._time,
            live_m=len(self.owner),
            sparsifier_size=self.sparsifier_size(),
        )

    def check_invariants(self, deep: bool = False) -> None:
        """Capacity, exact partition and disjoint output; ``deep`` also checks every engine."""
        total = 0
        for i in range(1, self.K + 1):
            sub = self.subs[i]
            assert len(sub) <= (1 << i), f"level {i} holds {len(sub)} > 2**{i} edges"
            eng = self.engines[i]
            assert (eng is not None) == bool(sub), f"engine presence mismatch at level {i}"
            if eng is not None:
                assert eng.live_count == len(sub), f"engine {i} out of sync with H_{i}"
                if deep:
                    assert eng.live_ids() == sub.keys()
                    eng.check_invariants()
            for eid in sub:
                assert self.owner.get(eid) == i, f"owner map wrong for edge {eid}"
            total += len(sub)
        assert total == len(self.owner), "owner map has stray entries"
        seen: set[int] = set()
        for _, ids in self.level_parts():
            assert seen.isdisjoint(ids), "output sparsifier ids overlap"
            seen |= ids
        assert seen <= self.owner.keys(), "output sparsifier contains dead edges"


def new_dynamic(n: int, max_m: int, cfg: Optional[SparsifyConfig] = None, scheduler=None) -> DynamicSparsifier:
    return DynamicSparsifier(n, max_m, cfg, scheduler)
