"""Slow, obviously-correct reference implementations used by the tests.

None of these share code paths with the package beyond the value types.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def brute_energy(H, x) -> Fraction:
    """Pairwise max over (u, v) in tail x head, exact rational arithmetic."""
    total = Fraction(0)
    for e in H:
        best = Fraction(0)
        for u in e.tail:
            for v in e.head:
                d = Fraction(float(x[u])) - Fraction(float(x[v]))
                if d > 0 and d * d > best:
                    best = d * d
        total += Fraction(e.weight) * best
    return total


def brute_cut(H, s) -> Fraction:
    s = set(s)
    return sum(
        (Fraction(e.weight) for e in H if any(u in s for u in e.tail) and any(v not in s for v in e.head)),
        Fraction(0),
    )


def brute_buckets(edges) -> dict:
    """E_{u,v} for every pair, sorted heaviest first then by id; empty buckets omitted."""
    edges = list(edges)
    n = 1 + max((max(e.tail + e.head) for e in edges), default=-1)
    out = {}
    for u, v in itertools.product(range(n), repeat=2):
        members = [e for e in edges if u in e.tail and v in e.head]
        if members:
            out[(u, v)] = [e.id for e in sorted(members, key=lambda e: (-e.weight, e.id))]
    return out


def brute_coreset(edges, lam: int) -> dict:
    """Greedy coreset by scanning all pairs of V x V in lexicographic order."""
    buckets = brute_buckets(edges)
    chosen = {}
    for p in sorted(buckets):
        taken = 0
        for eid in buckets[p]:
            if taken == lam:
                break
            if eid not in chosen:
                chosen[eid] = p
                taken += 1
    return chosen


class NaiveLevel:
    def __init__(self, edges_by_id, input_ids, coreset, sample):
        self.edges = edges_by_id
        self.input = set(input_ids)
        self.coreset = dict(coreset)
        self.sample = set(sample)

    def bucket(self, p):
        u, v = p
        members = [self.edges[i] for i in self.input if u in self.edges[i].tail and v in self.edges[i].head]
        return [e.id for e in sorted(members, key=lambda e: (-e.weight, e.id))]

    def delete(self, x):
        """Returns the id that left this level's sample (to be deleted from the next level)."""
        self.input.remove(x)
        if x in self.sample:
            self.sample.remove(x)
            return x
        if x in self.coreset:
            p = self.coreset.pop(x)
            candidates = [e for e in self.bucket(p) if e not in self.coreset]
            if candidates:
                r = candidates[0]
                self.coreset[r] = p
                if r in self.sample:
                    self.sample.remove(r)
                    return r
        return None


class NaiveDecremental:
    """Replays deletions level by level from a copy of an engine's initial state."""

    def __init__(self, engine):
        self.edges = {e.id: e for e in engine.base()}
        self.live = set(self.edges)
        self.levels = [
            NaiveLevel(self.edges, ls.input_ids, ls.coreset, ls.sample) for ls in engine.levels
        ]

    def delete(self, e):
        self.live.remove(e)
        target = e
        for lvl in self.levels:
            if target is None:
                break
            target = lvl.delete(target)

    def sparsifier(self) -> dict:
        """id -> weight."""
        if not self.levels:
            return {i: self.edges[i].weight for i in self.live}
        out = {}
        for i, lvl in enumerate(self.levels, start=1):
            for eid in lvl.coreset:
                out[eid] = self.edges[eid].weight * 2 ** (i - 1)
        for eid in self.levels[-1].sample:
            out[eid] = self.edges[eid].weight * 2 ** len(self.levels)
        return out
