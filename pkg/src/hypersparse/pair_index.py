"""Per-pair ordered edge sets ``E_{u,v}``.

``E_{u,v}`` holds the edges with ``u`` in the tail and ``v`` in the head,
ordered heaviest first with ties broken by ascending edge id.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Iterator, Optional

from sortedcontainers import SortedList

from .hypergraph import Hyperedge
from .scheduler import Scheduler, SequentialScheduler

__all__ = ["PairKey", "PairIndex", "build_index"]

PairKey = tuple[int, int]


class PairIndex:
    """Buckets keyed by ``(u, v)``; each bucket is a ``SortedList`` of ``(-weight, id)``.

    Buckets are created on demand and dropped when they empty out.
    """

    def __init__(self):
        self._buckets: dict[PairKey, SortedList] = {}
        self._pairs: dict[int, tuple[PairKey, ...]] = {}
        self._entry: dict[int, tuple[float, int]] = {}

    @classmethod
    def build(cls, edges: Iterable[Hyperedge]) -> "PairIndex":
        index = cls()
        groups: dict[PairKey, list] = defaultdict(list)
        for e in edges:
            if e.id in index._pairs:
                raise ValueError(f"duplicate edge id {e.id}")
            entry = (-e.weight, e.id)
            pairs = tuple(e.pairs())
            index._pairs[e.id] = pairs
            index._entry[e.id] = entry
            for p in pairs:
                groups[p].append(entry)
        index._buckets = {p: SortedList(entries) for p, entries in groups.items()}
        return index

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, eid: int) -> bool:
        return eid in self._pairs

    def keys(self) -> list[PairKey]:
        """Non-empty pair keys in lexicographic order."""
        return sorted(self._buckets)

    def bucket(self, p: PairKey) -> list[int]:
        b = self._buckets.get(p)
        return [] if b is None else [eid for _, eid in b]

    def iter_bucket(self, p: PairKey) -> Iterator[int]:
        b = self._buckets.get(p)
        if b is not None:
            for _, eid in b:
                yield eid

    def total_entries(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def pairs_of(self, eid: int) -> list[PairKey]:
        try:
            return list(self._pairs[eid])
        except KeyError:
            raise KeyError(f"edge {eid} is not indexed") from None

    def remove_edge(self, eid: int) -> None:
        try:
            pairs = self._pairs.pop(eid)
        except KeyError:
            raise KeyError(f"edge {eid} is not indexed") from None
        entry = self._entry.pop(eid)
        for p in pairs:
            b = self._buckets[p]
            b.remove(entry)
            if not b:
                del self._buckets[p]

    def heaviest_outside(
        self, p: PairKey, excluded: Callable[[int], bool]
    ) -> Optional[int]:
        """First edge of ``E_p`` (in bucket order) for which ``excluded`` is false."""
        b = self._buckets.get(p)
        if b is None:
            return None
        for _, eid in b:
            if not excluded(eid):
                return eid
        return None

    def remove_edges_batch(self, ids: Iterable[int], scheduler: Scheduler | None = None) -> None:
        """Remove many edges; the per-bucket work runs on ``scheduler``.

        The final state equals removing the ids one at a time in any order.
        """
        ids = list(ids)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate ids in batch removal")
        for eid in ids:
            if eid not in self._pairs:
                raise KeyError(f"edge {eid} is not indexed")
        work: dict[PairKey, list] = defaultdict(list)
        for eid in ids:
            entry = self._entry[eid]
            for p in self._pairs[eid]:
                work[p].append(entry)

        # buckets are disjoint state, so each task touches only its own list
        def drain(item):
            p, entries = item
            b = self._buckets[p]
            for entry in entries:
                b.remove(entry)
            return p, not b

        sched = scheduler or SequentialScheduler()
        for p, emptied in sched.map(drain, sorted(work.items())):
            if emptied:
                del self._buckets[p]
        for eid in ids:
            del self._pairs[eid]
            del self._entry[eid]

    def snapshot(self) -> dict[PairKey, list[int]]:
        """Plain-data copy of every bucket, for equality checks."""
        return {p: self.bucket(p) for p in self.keys()}


def build_index(edges: Iterable[Hyperedge]) -> PairIndex:
    """Index a hypergraph (or any iterable of hyperedges)."""
    return PairIndex.build(edges)
