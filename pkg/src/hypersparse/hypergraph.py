"""Directed weighted hypergraphs and their energy function.

A hyperedge ``e`` has a non-empty tail ``T(e)``, a non-empty head ``H(e)``
(the two may overlap) and a positive weight.  The energy of a vertex vector
``x`` is

    Q(x) = sum_e  w_e * max_{u in T(e), v in H(e)} (x_u - x_v)_+ ** 2

which we evaluate per edge as ``w_e * (max_T x - min_H x)_+ ** 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Hyperedge",
    "Hypergraph",
    "new_hypergraph",
    "rank",
    "energy",
    "energies",
    "edge_energies",
    "directed_cut_value",
    "indicator",
    "union_disjoint",
]


def _vertex_tuple(vertices: Iterable[int], what: str) -> tuple[int, ...]:
    out = tuple(sorted({int(v) for v in vertices}))
    if not out:
        raise ValueError(f"empty {what}")
    if out[0] < 0:
        raise ValueError(f"negative vertex in {what}: {out[0]}")
    return out


@dataclass(frozen=True, slots=True)
class Hyperedge:
    """A directed hyperedge. Tail and head are stored as sorted tuples."""

    id: int
    tail: tuple[int, ...]
    head: tuple[int, ...]
    weight: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "tail", _vertex_tuple(self.tail, "tail"))
        object.__setattr__(self, "head", _vertex_tuple(self.head, "head"))
        w = float(self.weight)
        if not (w > 0.0 and math.isfinite(w)):
            raise ValueError(f"edge weight must be positive and finite, got {self.weight!r}")
        object.__setattr__(self, "weight", w)
        if self.id < 0:
            raise ValueError(f"edge id must be non-negative, got {self.id}")

    @property
    def size(self) -> int:
        """``|T(e) ∪ H(e)|``."""
        return len(set(self.tail).union(self.head))

    def pairs(self) -> Iterator[tuple[int, int]]:
        for u in self.tail:
            for v in self.head:
                yield (u, v)

    def scaled(self, factor: float) -> "Hyperedge":
        # tail/head already normalised, skip re-validation cost where we can
        e = object.__new__(Hyperedge)
        object.__setattr__(e, "id", self.id)
        object.__setattr__(e, "tail", self.tail)
        object.__setattr__(e, "head", self.head)
        object.__setattr__(e, "weight", self.weight * factor)
        return e


class Hypergraph:
    """An immutable directed hypergraph on vertices ``0..n-1``.

    Edges are kept in ascending id order, so two hypergraphs with the same
    edge set iterate (and evaluate) identically.
    """

    __slots__ = ("n", "_edges", "__dict__")

    def __init__(self, n: int, edges: Iterable[Hyperedge] = ()):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        self.n = int(n)
        table: dict[int, Hyperedge] = {}
        for e in edges:
            if e.id in table:
                raise ValueError(f"duplicate edge id {e.id}")
            if e.tail[-1] >= n or e.head[-1] >= n:
                raise ValueError(f"edge {e.id} references a vertex outside [0, {n})")
            table[e.id] = e
        self._edges = {k: table[k] for k in sorted(table)}

    @property
    def m(self) -> int:
        return len(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self) -> Iterator[Hyperedge]:
        return iter(self._edges.values())

    def __contains__(self, eid: int) -> bool:
        return eid in self._edges

    def __getitem__(self, eid: int) -> Hyperedge:
        return self._edges[eid]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m})"

    def ids(self) -> list[int]:
        return list(self._edges)

    def edges(self) -> list[Hyperedge]:
        return list(self._edges.values())

    def total_weight(self) -> float:
        return math.fsum(e.weight for e in self)

    @cached_property
    def _flat(self):
        """Flattened incidence arrays for vectorised evaluation."""
        es = list(self._edges.values())
        tails = np.fromiter((v for e in es for v in e.tail), dtype=np.intp)
        heads = np.fromiter((v for e in es for v in e.head), dtype=np.intp)
        t_len = np.fromiter((len(e.tail) for e in es), dtype=np.intp, count=len(es))
        h_len = np.fromiter((len(e.head) for e in es), dtype=np.intp, count=len(es))
        t_off = np.zeros(len(es), dtype=np.intp)
        h_off = np.zeros(len(es), dtype=np.intp)
        if es:
            t_off[1:] = np.cumsum(t_len)[:-1]
            h_off[1:] = np.cumsum(h_len)[:-1]
        w = np.fromiter((e.weight for e in es), dtype=np.float64, count=len(es))
        return tails, t_off, heads, h_off, w


def new_hypergraph(n: int, edges: Sequence[tuple[Iterable[int], Iterable[int], float]]) -> Hypergraph:
    """Build a hypergraph from ``(tail, head, weight)`` triples; ids follow input order."""
    return Hypergraph(n, (Hyperedge(i, t, h, w) for i, (t, h, w) in enumerate(edges)))


def rank(H: Hypergraph) -> int:
    """Largest ``|T(e) ∪ H(e)|`` over all edges, 0 for an empty hypergraph."""
    return max((e.size for e in H), default=0)


def _as_vector(H: Hypergraph, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != H.n:
        raise ValueError(f"vector length {x.shape} does not match n={H.n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("energy vector has non-finite entries")
    return x


def edge_energies(H: Hypergraph, X) -> np.ndarray:
    """Per-edge energy terms.

    ``X`` is either a single vector of length ``n`` (result shape ``(m,)``) or
    a ``(k, n)`` stack of vectors (result shape ``(k, m)``).
    """
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X2 = np.atleast_2d(X)
    if X2.shape[1] != H.n:
        raise ValueError(f"vector length {X2.shape[1]} does not match n={H.n}")
    if H.m == 0:
        out = np.zeros((X2.shape[0], 0))
        return out[0] if single else out
    tails, t_off, heads, h_off, w = H._flat
    hi = np.maximum.reduceat(X2[:, tails], t_off, axis=1)
    lo = np.minimum.reduceat(X2[:, heads], h_off, axis=1)
    d = np.maximum(hi - lo, 0.0)
    out = w * (d * d)
    return out[0] if single else out


def energy(H: Hypergraph, x, exact: bool = False):
    """Energy ``Q_H(x)``.

    The float result is the correctly rounded sum (``math.fsum``) of the
    per-edge terms.  With ``exact=True`` the value is returned as a
    :class:`fractions.Fraction` computed without any rounding.
    """
    x = _as_vector(H, x)
    if exact:
        xs = [Fraction(float(v)) for v in x]
        total = Fraction(0)
        for e in H:
            d = max(xs[u] for u in e.tail) - min(xs[v] for v in e.head)
            if d > 0:
                total += Fraction(e.weight) * d * d
        return total
    return math.fsum(edge_energies(H, x))


def energies(H: Hypergraph, X) -> np.ndarray:
    """Energies for each row of a ``(k, n)`` array, each matching :func:`energy`."""
    terms = edge_energies(H, np.atleast_2d(X))
    return np.array([math.fsum(row) for row in terms])


def indicator(n: int, s: Iterable[int]) -> np.ndarray:
    x = np.zeros(n)
    for v in s:
        x[v] = 1.0
    return x


def directed_cut_value(H: Hypergraph, s: Iterable[int]) -> float:
    """Total weight of edges with a tail vertex in ``s`` and a head vertex outside it."""
    s = set(s)
    for v in s:
        if not 0 <= v < H.n:
            raise ValueError(f"vertex {v} out of range [0, {H.n})")
    return math.fsum(
        e.weight for e in H if not s.isdisjoint(e.tail) and not s.issuperset(e.head)
    )


def union_disjoint(parts: Sequence[Hypergraph]) -> Hypergraph:
    """Edge-disjoint union of hypergraphs on the same vertex set."""
    if not parts:
        raise ValueError("union of an empty list has no vertex count")
    n = parts[0].n
    for p in parts:
        if p.n != n:
            raise ValueError(f"mismatched vertex counts {n} and {p.n}")
    # Hypergraph() rejects duplicate ids
    return Hypergraph(n, (e for p in parts for e in p))
