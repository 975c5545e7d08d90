"""One-shot sparsification: coreset-and-sample and the recursive driver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .hypergraph import Hyperedge, Hypergraph
from .pair_index import PairIndex, PairKey
from .sampling import coin_flips, derive_key

__all__ = [
    "SparsifyConfig",
    "LevelArtifacts",
    "SparsifierBundle",
    "lambda_for",
    "level_budget",
    "mstar_for",
    "select_coreset",
    "coreset_and_sample",
    "spectral_sparsify",
]


@dataclass(frozen=True)
class SparsifyConfig:
    """Parameters shared by the static, decremental and fully dynamic builders.

    ``lambda_override`` and ``mstar_override`` replace the computed coreset
    size and recursion threshold; at desk scale the computed threshold is
    never reached, so ``mstar_override=0`` is how recursion gets exercised.
    """

    eps: float = 0.5
    c_lambda: float = 1.0
    c: float = 3.0
    lambda_override: Optional[int] = None
    mstar_override: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not self.c_lambda > 0:
            raise ValueError(f"c_lambda must be positive, got {self.c_lambda}")
        if not self.c >= 3:
            raise ValueError(f"c must be >= 3, got {self.c}")
        if self.lambda_override is not None and self.lambda_override < 0:
            raise ValueError("lambda_override must be non-negative")

    def with_seed(self, seed: int) -> "SparsifyConfig":
        return replace(self, seed=seed)


def _log_term(m: int) -> float:
    return max(1.0, math.log2(m)) if m >= 2 else 1.0


def lambda_for(m: int, cfg: SparsifyConfig, eps_effective: float) -> int:
    """Per-pair coreset size ``ceil(c_lambda * log2(m)**3 / eps**2)``."""
    if cfg.lambda_override is not None:
        return cfg.lambda_override
    return math.ceil(cfg.c_lambda * _log_term(m) ** 3 / eps_effective**2)


def level_budget(m: int) -> int:
    """Maximum recursion depth, ``ceil(log_{4/3} m)``."""
    if m < 1:
        raise ValueError("level budget is undefined for an empty hypergraph")
    return math.ceil(math.log(m) / math.log(4 / 3))


def mstar_for(n: int, eps: float, m: int, override: Optional[int] = None) -> int:
    """Recursion threshold ``ceil(n**2 / eps**2 * log2(m)**3)``."""
    if override is not None:
        return override
    return math.ceil(n * n / eps**2 * _log_term(m) ** 3)


def select_coreset(index: PairIndex, lam: int) -> dict[int, PairKey]:
    """Greedy coreset: for every pair in lexicographic order, take the first
    ``lam`` edges of ``E_{u,v}`` not yet chosen.

    Returns the coreset as a map from edge id to the pair that added it.
    """
    chosen: dict[int, PairKey] = {}
    if lam <= 0:
        return chosen
    for p in index.keys():
        taken = 0
        for eid in index.iter_bucket(p):
            if eid not in chosen:
                chosen[eid] = p
                taken += 1
                if taken == lam:
                    break
    return chosen


def _sample(key: int, ids: Sequence[int]) -> list[int]:
    if not ids:
        return []
    keep = coin_flips(key, ids)
    return [eid for eid, k in zip(ids, keep.tolist()) if k]


def coreset_and_sample(
    H: Hypergraph, eps_effective: float, cfg: SparsifyConfig, key: Optional[int] = None
) -> tuple[Hypergraph, Hypergraph]:
    """Split ``H`` into a coreset (weights kept) and a half-sample of the rest (weights doubled).

    ``key`` selects the coin stream; by default it is derived from ``cfg.seed``.
    """
    if key is None:
        key = derive_key(cfg.seed, "sample", 1)
    index = PairIndex.build(H)
    chosen = select_coreset(index, lambda_for(H.m, cfg, eps_effective))
    rest = [eid for eid in H.ids() if eid not in chosen]
    kept = _sample(key, rest)
    coreset = Hypergraph(H.n, (H[eid] for eid in chosen))
    sample = Hypergraph(H.n, (H[eid].scaled(2.0) for eid in kept))
    return coreset, sample


@dataclass
class _LevelBuild:
    """Everything one recursion level needs to keep for later deletions."""

    level: int
    input_ids: list[int]
    index: PairIndex
    attribution: dict[int, PairKey]
    sample_ids: list[int]
    key: int
    lam: int


def _build_levels(
    base: Sequence[Hyperedge], n: int, cfg: SparsifyConfig
) -> tuple[list[_LevelBuild], int, int, Optional[float]]:
    """Run the recursion on base edges (original weights, ascending id).

    Level ``i`` works on ``S_{i-1}`` whose weights are ``2**(i-1)`` times the
    originals; a uniform power-of-two scale leaves the bucket order unchanged,
    so the indexes are built from the original weights.
    """
    m = len(base)
    if m == 0:
        return [], 0, mstar_for(n, cfg.eps, 1, cfg.mstar_override), None
    k = level_budget(m)
    mstar = mstar_for(n, cfg.eps, m, cfg.mstar_override)
    eps_level = cfg.eps / (2 * k) if k > 0 else None
    threshold = 32 * cfg.c * mstar
    levels: list[_LevelBuild] = []
    current = list(base)
    while len(levels) < k and current and len(current) >= threshold:
        level = len(levels) + 1
        index = PairIndex.build(current)
        lam = lambda_for(len(current), cfg, eps_level)
        chosen = select_coreset(index, lam)
        rest = [e.id for e in current if e.id not in chosen]
        key = derive_key(cfg.seed, "sample", level)
        kept = _sample(key, rest)
        levels.append(
            _LevelBuild(level, [e.id for e in current], index, chosen, kept, key, lam)
        )
        kept_set = set(kept)
        current = [e for e in current if e.id in kept_set]
    return levels, k, mstar, eps_level


@dataclass
class LevelArtifacts:
    level: int
    coreset: Hypergraph
    sample: Hypergraph


@dataclass
class SparsifierBundle:
    levels: list[LevelArtifacts]
    i_last: int
    sparsifier: Hypergraph
    k: int
    mstar: int
    eps_level: Optional[float] = None
    lambdas: list[int] = field(default_factory=list)


def spectral_sparsify(H: Hypergraph, cfg: Optional[SparsifyConfig] = None) -> SparsifierBundle:
    """Static sparsifier: the union of every level's coreset plus the last sample."""
    cfg = cfg or SparsifyConfig()
    builds, k, mstar, eps_level = _build_levels(H.edges(), H.n, cfg)
    artifacts = []
    for b in builds:
        scale = math.ldexp(1.0, b.level - 1)
        coreset = Hypergraph(H.n, (H[eid].scaled(scale) for eid in b.attribution))
        sample = Hypergraph(H.n, (H[eid].scaled(2 * scale) for eid in b.sample_ids))
        artifacts.append(LevelArtifacts(b.level, coreset, sample))
    if artifacts:
        parts = [a.coreset for a in artifacts] + [artifacts[-1].sample]
        sparsifier = Hypergraph(H.n, (e for p in parts for e in p))
    else:
        sparsifier = H
    return SparsifierBundle(
        levels=artifacts,
        i_last=len(artifacts),
        sparsifier=sparsifier,
        k=k,
        mstar=mstar,
        eps_level=eps_level,
        lambdas=[b.lam for b in builds],
    )
