import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypersparse import (
    Hypergraph,
    SparsifyConfig,
    build_index,
    coreset_and_sample,
    energy,
    new_hypergraph,
    spectral_sparsify,
)
from hypersparse.generate import random_hypergraph
from hypersparse.sampling import coin_flips, derive_key
from hypersparse.static import lambda_for, level_budget, mstar_for, select_coreset

from conftest import hypergraphs
from oracles import brute_buckets, brute_coreset


def budget_oracle(m):
    """Smallest k >= 0 with (4/3)**k >= m, in integer arithmetic."""
    k = 0
    while 4**k < m * 3**k:
        k += 1
    return k


@pytest.mark.parametrize("m, expected", [(100, 17), (1, 0), (2, 3)])
def test_level_budget_examples(m, expected):
    assert level_budget(m) == expected == budget_oracle(m)


@given(st.integers(1, 10**6))
def test_level_budget_matches_oracle(m):
    assert level_budget(m) == budget_oracle(m)


def test_level_budget_rejects_zero():
    with pytest.raises(ValueError):
        level_budget(0)


def test_lambda_examples():
    cfg = SparsifyConfig(c_lambda=1.0)
    assert lambda_for(1024, cfg, 0.5) == 4000
    assert lambda_for(2, cfg, 0.5) == 4
    assert lambda_for(10**6, SparsifyConfig(lambda_override=3), 0.5) == 3


@given(st.integers(1, 30), st.sampled_from([0.5, 0.25, 0.125]), st.sampled_from([1, 2, 3]))
def test_lambda_powers_of_two_exact(p, eps, c_lambda):
    expected = Fraction(c_lambda) * p**3 / Fraction(eps) ** 2
    assert lambda_for(2**p, SparsifyConfig(c_lambda=c_lambda), eps) == math.ceil(expected)


def test_mstar_examples():
    assert mstar_for(4, 0.5, 1024) == 64000
    assert mstar_for(4, 0.5, 1024, override=0) == 0
    assert mstar_for(1, 0.5, 2) == 4


def test_config_validation():
    for bad in (dict(eps=0.0), dict(eps=1.0), dict(c=2.0), dict(c_lambda=0.0), dict(lambda_override=-1)):
        with pytest.raises(ValueError):
            SparsifyConfig(**bad)


# --- sampling ----------------------------------------------------------------


def test_coins_are_order_free():
    ids = np.arange(500)
    perm = np.random.default_rng(1).permutation(ids)
    key = derive_key(3, "sample", 1)
    assert (coin_flips(key, ids)[perm] == coin_flips(key, perm)).all()


def test_coins_look_fair():
    flips = coin_flips(derive_key(0, "x"), np.arange(20000))
    # 20000 fair coins: sd = 70.7, allow 5 sd
    assert abs(int(flips.sum()) - 10000) < 354


def test_derive_key_distinguishes_labels():
    keys = {derive_key(1), derive_key(1, "a"), derive_key(1, "b"), derive_key(2, "a"), derive_key(1, "a", 0)}
    assert len(keys) == 5


# --- coreset and sample ------------------------------------------------------


def test_large_lambda_absorbs_everything():
    H = random_hypergraph(5, 30, 3, seed=1)
    C, S = coreset_and_sample(H, 0.5, SparsifyConfig(lambda_override=30))
    assert C == H and S.m == 0


def test_two_parallel_edges():
    H = new_hypergraph(2, [({0}, {1}, 5.0), ({0}, {1}, 3.0)])
    for seed in range(8):
        cfg = SparsifyConfig(lambda_override=1, seed=seed)
        C, S = coreset_and_sample(H, 0.5, cfg)
        assert [(e.id, e.weight) for e in C] == [(0, 5.0)]
        heads = bool(coin_flips(derive_key(seed, "sample", 1), [1])[0])
        assert [(e.id, e.weight) for e in S] == ([(1, 6.0)] if heads else [])


def test_empty_input():
    C, S = coreset_and_sample(Hypergraph(3), 0.5, SparsifyConfig())
    assert C.m == 0 and S.m == 0


@given(hypergraphs(max_n=5, max_m=14), st.integers(0, 4))
def test_coreset_matches_brute_force(H, lam):
    assert select_coreset(build_index(H), lam) == brute_coreset(list(H), lam)


@given(hypergraphs(max_n=5, max_m=14), st.integers(0, 4), st.integers(0, 2**32))
def test_coreset_coverage_and_disjointness(H, lam, seed):
    C, S = coreset_and_sample(H, 0.5, SparsifyConfig(lambda_override=lam, seed=seed))
    cset = set(C.ids())
    for p, members in brute_buckets(list(H)).items():
        assert len(cset.intersection(members)) >= min(lam, len(members))
    assert cset.isdisjoint(S.ids())
    assert cset | set(S.ids()) <= set(H.ids())
    for e in C:
        assert e.weight == H[e.id].weight
    for e in S:
        assert e.weight == 2 * H[e.id].weight


def test_sample_size_is_binomial_half():
    # lambda = 0: |S| ~ Binomial(m, 1/2); mean over 1000 seeds within 3 standard errors of m/2
    H = random_hypergraph(6, 120, 3, seed=4)
    sizes = np.array(
        [coreset_and_sample(H, 0.5, SparsifyConfig(lambda_override=0, seed=s))[1].m for s in range(1000)]
    )
    se = math.sqrt(H.m / 4) / math.sqrt(len(sizes))
    assert abs(sizes.mean() - H.m / 2) <= 3 * se


def test_one_level_unbiased_two_point():
    H = new_hypergraph(2, [({0}, {1}, 1.0)])
    x = [1.0, 0.0]
    outcomes = []
    for s in range(2000):
        C, S = coreset_and_sample(H, 0.5, SparsifyConfig(lambda_override=0, seed=s))
        outcomes.append(energy(C, x) + energy(S, x))
    assert set(outcomes) == {0.0, 2.0}
    # Binomial(2000, 1/2) heads, 5 sd band on the mean of {0, 2}
    assert abs(np.mean(outcomes) - 1.0) < 5 * 1.0 / math.sqrt(2000)


# --- recursive driver --------------------------------------------------------


def test_guard_fails_at_desk_scale():
    H = random_hypergraph(8, 300, 4, seed=2)
    bundle = spectral_sparsify(H, SparsifyConfig())
    assert bundle.i_last == 0 and bundle.sparsifier == H and bundle.levels == []


def test_absorption_path():
    H = random_hypergraph(8, 300, 4, seed=2)
    bundle = spectral_sparsify(H, SparsifyConfig(mstar_override=0, lambda_override=300))
    assert bundle.i_last == 1
    assert bundle.sparsifier == H
    assert bundle.levels[0].sample.m == 0


def test_zero_lambda_doubles_per_level():
    H = random_hypergraph(6, 400, 3, seed=9)
    bundle = spectral_sparsify(H, SparsifyConfig(mstar_override=0, lambda_override=0, seed=1))
    assert bundle.i_last >= 3
    for lvl in bundle.levels:
        assert lvl.coreset.m == 0
        for e in lvl.sample:
            assert e.weight == 2**lvl.level * H[e.id].weight


def test_empty_bundle():
    bundle = spectral_sparsify(Hypergraph(4), SparsifyConfig(mstar_override=0))
    assert bundle.i_last == 0 and bundle.sparsifier.m == 0


def test_level_count_bounded_by_budget():
    # lambda = 0 and a tiny input: the budget, not exhaustion, stops the recursion
    H = new_hypergraph(2, [({0}, {1}, 1.0), ({0}, {1}, 1.0)])
    for seed in range(50):
        bundle = spectral_sparsify(H, SparsifyConfig(mstar_override=0, lambda_override=0, seed=seed))
        assert bundle.i_last <= bundle.k == 3


@given(hypergraphs(max_n=5, max_m=20), st.integers(0, 3), st.integers(0, 2**32))
def test_provenance_and_determinism(H, lam, seed):
    cfg = SparsifyConfig(mstar_override=0, lambda_override=lam, seed=seed)
    bundle = spectral_sparsify(H, cfg)
    assert spectral_sparsify(H, cfg).sparsifier == bundle.sparsifier
    assert bundle.i_last <= bundle.k
    seen = set()
    for lvl in bundle.levels:
        for e in lvl.coreset:
            assert e.id not in seen
            seen.add(e.id)
            assert e.weight == 2 ** (lvl.level - 1) * H[e.id].weight
    if bundle.levels:
        last = bundle.levels[-1]
        for e in last.sample:
            assert e.id not in seen
            assert e.weight == 2**bundle.i_last * H[e.id].weight
        assert bundle.sparsifier.m == len(seen) + last.sample.m
    # nesting: each level's coreset and sample come out of the previous sample
    prev = set(H.ids())
    for lvl in bundle.levels:
        assert set(lvl.coreset.ids()) | set(lvl.sample.ids()) <= prev
        prev = set(lvl.sample.ids())
