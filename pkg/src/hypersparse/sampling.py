"""Counter-based randomness.

Every coin is a pure function of ``(key, edge id)``, so the outcome of a
sampling pass does not depend on the order in which edges are visited.
Keys are derived from a root seed by hashing a label path.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_key", "mix64", "coin_flips"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def derive_key(seed: int, *labels) -> int:
    """64-bit sub-seed for ``seed`` and a label path, e.g. ``derive_key(7, "rebuild", 12)``."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed)).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "little")


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser, applied elementwise (wraps modulo 2**64)."""
    z = np.asarray(z, dtype=np.uint64) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def coin_flips(key: int, ids) -> np.ndarray:
    """Fair coins, one per id; ``True`` means heads (keep the edge)."""
    ids = np.asarray(ids, dtype=np.uint64)
    z = mix64(mix64(ids) ^ np.uint64(key & 0xFFFFFFFFFFFFFFFF))
    return (z >> np.uint64(63)).astype(bool)
