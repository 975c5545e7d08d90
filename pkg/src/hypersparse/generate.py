"""Random directed hypergraphs and update streams for tests, demos and benchmarks."""

from __future__ import annotations

import numpy as np

from .formats import AddOp, BatchOp, DelOp
from .hypergraph import Hypergraph, new_hypergraph
from .sampling import derive_key

__all__ = ["random_edge_specs", "random_hypergraph", "random_stream"]

WEIGHT_KINDS = ("uniform", "pareto", "constant")


def random_edge_specs(
    n: int,
    m: int,
    r: int,
    rng: np.random.Generator,
    weights: str = "uniform",
    alpha: float = 2.0,
    allow_self: bool = False,
) -> list[tuple[tuple[int, ...], tuple[int, ...], float]]:
    """``m`` random ``(tail, head, weight)`` triples with ``|T ∪ H| <= r``.

    Tail size is uniform in ``[1, r // 2]`` and head size uniform in
    ``[1, r - |T|]``; tail and head are disjoint.  ``r == 1`` needs
    ``allow_self`` and yields self-loops ``T = H = {v}``.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if r > n:
        raise ValueError(f"rank {r} exceeds vertex count {n}")
    if r < 2 and not (r == 1 and allow_self):
        raise ValueError("rank must be >= 2 (rank 1 only with allow_self)")
    if weights not in WEIGHT_KINDS:
        raise ValueError(f"weight distribution must be one of {WEIGHT_KINDS}")
    specs = []
    for _ in range(m):
        if r == 1:
            v = int(rng.integers(n))
            tail, head = (v,), (v,)
        else:
            nt = int(rng.integers(1, r // 2 + 1))
            nh = int(rng.integers(1, r - nt + 1))
            verts = rng.choice(n, size=nt + nh, replace=False).tolist()
            tail, head = tuple(sorted(verts[:nt])), tuple(sorted(verts[nt:]))
        if weights == "uniform":
            w = 1.0 - float(rng.random())
        elif weights == "pareto":
            w = 1.0 + float(rng.pareto(alpha))
        else:
            w = 1.0
        specs.append((tail, head, w))
    return specs


def random_hypergraph(n: int, m: int, r: int, seed: int = 0, **kw) -> Hypergraph:
    rng = np.random.default_rng(derive_key(seed, "gen"))
    return new_hypergraph(n, random_edge_specs(n, m, r, rng, **kw))


def random_stream(
    n: int,
    r: int,
    ops: int,
    seed: int = 0,
    initial_live: int = 0,
    p_add: float = 0.6,
    max_m: int | None = None,
    batch_max: int = 1,
    weights: str = "uniform",
) -> list:
    """A random add/delete stream over ids allocated in insertion order.

    ``initial_live`` ids ``0..initial_live-1`` are assumed live at the start.
    With ``batch_max > 1`` operations are grouped into batches of random size
    in ``[1, batch_max]``; a batch never deletes an edge it also adds.
    """
    rng = np.random.default_rng(derive_key(seed, "stream"))
    live = list(range(initial_live))
    next_id = initial_live
    out = []
    remaining = ops
    while remaining > 0:
        size = 1 if batch_max <= 1 else int(rng.integers(1, batch_max + 1))
        size = min(size, remaining)
        group = []
        pending_adds = 0
        for _ in range(size):
            room = max_m is None or len(live) + pending_adds < max_m
            if live and (not room or rng.random() >= p_add):
                eid = live.pop(int(rng.integers(len(live))))
                group.append(DelOp(eid))
            elif room:
                t, h, w = random_edge_specs(n, 1, r, rng, weights=weights)[0]
                group.append(AddOp(t, h, w))
                pending_adds += 1
        # ids of a batch's adds are allocated after its deletes are applied
        for op in group:
            if isinstance(op, AddOp):
                live.append(next_id)
                next_id += 1
        remaining -= size
        if batch_max <= 1:
            out.extend(group)
        elif group:
            out.append(BatchOp(tuple(group)))
    return out
