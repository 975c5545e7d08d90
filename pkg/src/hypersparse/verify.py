"""Brute-force and statistical checks of the two-sided energy bound

    (1 - eps) * Q_sparse(x) <= Q_H(x) <= (1 + eps) * Q_sparse(x).

Ratios are reported as ``Q_H(x) / Q_sparse(x)``.  Two zero energies pass;
exactly one zero energy is a violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .hypergraph import Hypergraph, energies, energy, union_disjoint
from .sampling import derive_key
from .static import SparsifyConfig, coreset_and_sample

__all__ = [
    "ApproxReport",
    "UnbiasednessReport",
    "cut_values",
    "check_random_vectors",
    "check_all_cuts",
    "sampling_unbiasedness",
    "decomposability_check",
]

MAX_CUT_VERTICES = 16
MAX_WITNESSES = 10


@dataclass
class ApproxReport:
    trials: int
    eps: float
    worst_ratio_low: float = 1.0
    worst_ratio_high: float = 1.0
    violations: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "eps": self.eps,
            "worst_ratio_low": self.worst_ratio_low,
            "worst_ratio_high": self.worst_ratio_high,
            "violations": self.violations,
        }


def _compare(q_h: np.ndarray, q_s: np.ndarray, eps: float, probes, trials: int) -> ApproxReport:
    report = ApproxReport(trials=trials, eps=eps)
    both_zero = (q_h == 0) & (q_s == 0)
    one_zero = (q_h == 0) ^ (q_s == 0)
    pos = ~both_zero & ~one_zero
    bad = one_zero.copy()
    if pos.any():
        ratio = q_h[pos] / q_s[pos]
        report.worst_ratio_low = float(min(1.0, ratio.min()))
        report.worst_ratio_high = float(max(1.0, ratio.max()))
        bad[pos] = (q_h[pos] < (1 - eps) * q_s[pos]) | (q_h[pos] > (1 + eps) * q_s[pos])
    if one_zero.any():
        if (q_h[one_zero] == 0).any():
            report.worst_ratio_low = 0.0
        if (q_s[one_zero] == 0).any():
            report.worst_ratio_high = math.inf
    report.violations = int(bad.sum())
    for k in np.flatnonzero(bad)[:MAX_WITNESSES]:
        report.witnesses.append(probes(int(k)))
    return report


def _same_n(H: Hypergraph, Hs: Hypergraph) -> None:
    if H.n != Hs.n:
        raise ValueError(f"vertex counts differ: {H.n} vs {Hs.n}")


def check_random_vectors(
    H: Hypergraph, H_sparse: Hypergraph, eps: float, trials: int = 1000, seed: int = 0
) -> ApproxReport:
    """Probe the bound on ``trials`` standard-normal vectors."""
    _same_n(H, H_sparse)
    rng = np.random.default_rng(derive_key(seed, "probe"))
    X = rng.standard_normal((trials, H.n))
    return _compare(energies(H, X), energies(H_sparse, X), eps, lambda k: X[k].copy(), trials)


def cut_values(H: Hypergraph) -> np.ndarray:
    """Directed cut value of every vertex subset, indexed by its bitmask."""
    if H.n > MAX_CUT_VERTICES:
        raise ValueError(f"cut enumeration needs n <= {MAX_CUT_VERTICES}, got {H.n}")
    masks = np.arange(1 << H.n, dtype=np.int64)
    out = np.zeros(1 << H.n)
    for e in H:
        tm = sum(1 << v for v in e.tail)
        hm = sum(1 << v for v in e.head)
        crossing = ((masks & tm) != 0) & ((masks & hm) != hm)
        out[crossing] += e.weight
    return out


def check_all_cuts(H: Hypergraph, H_sparse: Hypergraph, eps: float) -> ApproxReport:
    """Exhaustive check over all ``2**n`` indicator vectors."""
    _same_n(H, H_sparse)
    n = H.n
    witness = lambda k: [v for v in range(n) if k >> v & 1]
    return _compare(cut_values(H), cut_values(H_sparse), eps, witness, 1 << n)


@dataclass
class UnbiasednessReport:
    runs: int
    target: float
    mean: float
    stderr: float

    @property
    def deviation(self) -> float:
        return abs(self.mean - self.target)

    @property
    def passed(self) -> bool:
        return self.deviation <= 4 * self.stderr


def sampling_unbiasedness(
    H: Hypergraph,
    eps_effective: float,
    runs: int,
    x,
    seed: int = 0,
    lambda_override: int = 0,
) -> UnbiasednessReport:
    """Monte Carlo mean of ``Q_{C∪S}(x)`` over independent coin streams."""
    if runs < 100:
        raise ValueError("need at least 100 runs")
    x = np.asarray(x, dtype=np.float64)
    target = energy(H, x)
    cfg = SparsifyConfig(eps=0.5, lambda_override=lambda_override, seed=seed)
    values = np.empty(runs)
    for r in range(runs):
        C, S = coreset_and_sample(H, eps_effective, cfg, key=derive_key(seed, "run", r))
        values[r] = energy(C, x) + energy(S, x)
    mean = math.fsum(values) / runs
    stderr = float(values.std(ddof=1) / math.sqrt(runs))
    return UnbiasednessReport(runs, target, mean, stderr)


def decomposability_check(
    parts: Sequence[Hypergraph], x=None, trials: int = 100, seed: int = 0
) -> bool:
    """Exact additivity of energy over edge-disjoint parts.

    Probes ``x`` (if given) plus ``trials`` random vectors, comparing in
    rational arithmetic so that the equality is literal.
    """
    if not parts:
        return True
    union = union_disjoint(parts)
    rng = np.random.default_rng(derive_key(seed, "decompose"))
    probes = [] if x is None else [np.asarray(x, dtype=np.float64)]
    probes.extend(rng.standard_normal((trials, union.n)))
    for v in probes:
        whole = energy(union, v, exact=True)
        pieces = sum((energy(p, v, exact=True) for p in parts), Fraction(0))
        if whole != pieces:
            return False
    return True
