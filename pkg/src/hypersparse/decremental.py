"""Deletion-only maintenance of the level stack built by :mod:`hypersparse.static`.

Each level keeps its coreset ``C_i``, its sample ``S_i`` and the pair index
over its input ``S_{i-1}``.  Deleting an edge from a level's input can
change that level's sample by at most one edge, and only that change is
forwarded to the next level.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .hypergraph import Hyperedge, Hypergraph
from .pair_index import PairIndex, PairKey
from .scheduler import Scheduler, get_scheduler
from .static import SparsifyConfig, _build_levels, _LevelBuild

__all__ = ["RecourseReport", "LevelState", "DecrementalSparsifier", "init_decremental"]


class UnknownEdgeError(KeyError):
    """Raised when deleting an edge that is not live."""


@dataclass
class RecourseReport:
    """Changes to the maintained sparsifier caused by one delete call.

    ``replacements`` counts, per level, how many coreset substitutions were made.
    """

    deletions_propagated: int = 0
    sparsifier_removed: list[int] = field(default_factory=list)
    sparsifier_added: list[int] = field(default_factory=list)
    replacements: Counter = field(default_factory=Counter)

    @property
    def recourse(self) -> int:
        return len(self.sparsifier_removed) + len(self.sparsifier_added)

    def merge(self, other: "RecourseReport") -> "RecourseReport":
        return RecourseReport(
            self.deletions_propagated + other.deletions_propagated,
            self.sparsifier_removed + other.sparsifier_removed,
            self.sparsifier_added + other.sparsifier_added,
            self.replacements + other.replacements,
        )


class LevelState:
    """One level: coreset (with the pair each member was taken for) and sample."""

    def __init__(self, build: _LevelBuild):
        self.level = build.level
        self.lam = build.lam
        self.key = build.key
        self.index: PairIndex = build.index
        self.input_ids: set[int] = set(build.input_ids)
        self.coreset: dict[int, PairKey] = dict(build.attribution)
        self.sample: set[int] = set(build.sample_ids)

    def __repr__(self) -> str:
        return (
            f"LevelState(level={self.level}, input={len(self.input_ids)}, "
            f"coreset={len(self.coreset)}, sample={len(self.sample)})"
        )

    def _resolve(self, x: int, dead: set[int]):
        """Drop ``x`` from coreset/sample and pick a replacement if it was a coreset member.

        Returns ``(replacement, forwarded, was_coreset)``.  ``forwarded`` is the
        edge that left this level's sample, if any; it must be deleted from
        the next level.  Index entries are not touched here: edges in
        ``dead`` are treated as already gone.
        """
        if x not in self.input_ids:
            raise UnknownEdgeError(f"edge {x} is not in level {self.level}")
        self.input_ids.remove(x)
        if x in self.sample:
            self.sample.remove(x)
            return None, x, False
        p = self.coreset.pop(x, None)
        if p is None:
            return None, None, False
        coreset = self.coreset
        r = self.index.heaviest_outside(p, lambda e: e in coreset or e in dead)
        if r is None:
            return None, None, True
        coreset[r] = p
        if r in self.sample:
            self.sample.remove(r)
            return r, r, True
        return r, None, True

    def delete(self, e: int) -> Optional[int]:
        """Delete one input edge; returns the coreset replacement, if one was made."""
        r, _, _ = self._resolve(e, {e})
        self.index.remove_edge(e)
        return r

    def check(self) -> None:
        assert self.coreset.keys().isdisjoint(self.sample), "coreset and sample overlap"
        assert self.coreset.keys() <= self.input_ids, "coreset escapes input"
        assert self.sample <= self.input_ids, "sample escapes input"
        assert len(self.index) == len(self.input_ids), "index out of sync with input"
        for eid, p in self.coreset.items():
            assert p in self.index.pairs_of(eid), f"edge {eid} attributed to foreign pair {p}"


class DecrementalSparsifier:
    """Maintains ``C_1 ∪ ... ∪ C_last ∪ S_last`` under edge deletions."""

    def __init__(self, H: Hypergraph, cfg: Optional[SparsifyConfig] = None):
        self.cfg = cfg or SparsifyConfig()
        self.n = H.n
        self._live: dict[int, Hyperedge] = {e.id: e for e in H}
        builds, self.k, self.mstar, self.eps_level = _build_levels(H.edges(), H.n, self.cfg)
        self.levels: list[LevelState] = [LevelState(b) for b in builds]
        self.initial_m = H.m
        self.deletions = 0
        self.recourse_total = 0

    @property
    def i_last(self) -> int:
        return len(self.levels)

    @property
    def live_count(self) -> int:
        return len(self._live)

    def live_ids(self) -> set[int]:
        return set(self._live)

    def __contains__(self, eid: int) -> bool:
        return eid in self._live

    def base(self) -> Hypergraph:
        return Hypergraph(self.n, self._live.values())

    def delete(self, e: int) -> RecourseReport:
        return self._delete([e], None)

    def delete_batch(self, ids: Iterable[int], scheduler: Scheduler | str | None = None) -> RecourseReport:
        """Delete several edges at once.

        The outcome is identical to calling :meth:`delete` on the ids in
        ascending order.  Levels are processed in order; within a level the
        replacements are resolved against tombstones and the pair-index
        removals then run as one bulk step on ``scheduler``.
        """
        ids = list(ids)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate ids in delete batch")
        return self._delete(sorted(ids), get_scheduler(scheduler))

    def _delete(self, targets: list[int], scheduler) -> RecourseReport:
        for eid in targets:
            if eid not in self._live:
                raise UnknownEdgeError(f"edge {eid} is not live")
        for eid in targets:
            del self._live[eid]
        report = RecourseReport()
        self.deletions += len(targets)
        if not self.levels:
            report.sparsifier_removed.extend(targets)
            self.recourse_total += report.recourse
            return report
        last = self.i_last
        for ls in self.levels:
            if not targets:
                break
            dead: set[int] = set()
            forwarded = []
            for x in targets:
                dead.add(x)
                r, fwd, was_coreset = ls._resolve(x, dead)
                if was_coreset:
                    report.sparsifier_removed.append(x)
                if r is not None:
                    report.sparsifier_added.append(r)
                    report.replacements[ls.level] += 1
                if fwd is not None:
                    if ls.level == last:
                        report.sparsifier_removed.append(fwd)
                    else:
                        forwarded.append(fwd)
            if len(targets) == 1:
                ls.index.remove_edge(targets[0])
            else:
                ls.index.remove_edges_batch(targets, scheduler)
            report.deletions_propagated += len(forwarded)
            targets = forwarded
        self.recourse_total += report.recourse
        return report

    def parts(self) -> list[tuple[int, set[int]]]:
        """``(weight exponent, id set)`` for each piece of the sparsifier view."""
        if not self.levels:
            return [(0, set(self._live))]
        out = [(ls.level - 1, set(ls.coreset)) for ls in self.levels]
        out.append((self.i_last, set(self.levels[-1].sample)))
        return out

    def sparsifier_size(self) -> int:
        if not self.levels:
            return len(self._live)
        return sum(len(ls.coreset) for ls in self.levels) + len(self.levels[-1].sample)

    def sparsifier_edges(self) -> list[Hyperedge]:
        live = self._live
        if not self.levels:
            return list(live.values())
        out = []
        for exp, ids in self.parts():
            scale = math.ldexp(1.0, exp)
            out.extend(live[eid].scaled(scale) for eid in ids)
        return out

    def current_sparsifier(self) -> Hypergraph:
        return Hypergraph(self.n, self.sparsifier_edges())

    def check_invariants(self) -> None:
        """Assert the structural invariants (nesting, disjointness, attribution)."""
        expected = set(self._live)
        for ls in self.levels:
            assert ls.input_ids == expected, f"level {ls.level} input does not match previous sample"
            ls.check()
            expected = ls.sample
        seen: set[int] = set()
        for _, ids in self.parts():
            assert seen.isdisjoint(ids), "sparsifier parts overlap"
            seen |= ids


def init_decremental(H: Hypergraph, cfg: Optional[SparsifyConfig] = None) -> DecrementalSparsifier:
    return DecrementalSparsifier(H, cfg)
