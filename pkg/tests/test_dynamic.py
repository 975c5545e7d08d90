from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypersparse import DynamicSparsifier, SparsifyConfig, energy
from hypersparse.decremental import UnknownEdgeError
from hypersparse.dynamic import CapacityError, batch_level, counter_level
from hypersparse.generate import random_edge_specs


def forced(lam=1, seed=0):
    return SparsifyConfig(mstar_override=0, lambda_override=lam, seed=seed)


def specs(count, n=6, r=3, seed=0):
    return random_edge_specs(n, count, r, np.random.default_rng(seed))


def sizes(ds):
    return [len(s) for s in ds.subs[1:]]


def test_counter_level_examples():
    assert [counter_level(t) for t in (1, 2, 3, 4)] == [1, 2, 1, 3]
    assert batch_level(0, 5) == 3
    with pytest.raises(ValueError):
        counter_level(0)


@given(st.integers(1, 2**40))
def test_counter_level_is_lowest_set_bit(t):
    i = counter_level(t)
    assert t % 2 ** (i - 1) == 0 and t % 2**i != 0
    assert batch_level(t - 1, t) == i


def test_level_count_and_bad_capacity():
    assert DynamicSparsifier(4, 1024).K == 11
    assert DynamicSparsifier(4, 1).K == 1
    with pytest.raises(ValueError):
        DynamicSparsifier(4, 0)
    with pytest.raises(ValueError):
        DynamicSparsifier(0, 4)


def test_four_inserts_land_in_level_three():
    ds = DynamicSparsifier(6, 64, forced())
    for tail, head, w in specs(4):
        ds.add(tail, head, w)
    assert sizes(ds)[:3] == [0, 0, 4]
    assert ds.rebuilds[1:4] == [2, 1, 1]
    ds.check_invariants(deep=True)


def test_capacity_error():
    ds = DynamicSparsifier(6, 2)
    ds.add_batch(specs(2))
    with pytest.raises(CapacityError):
        ds.add([0], [1], 1.0)
    assert ds.live_count == 2


def test_invalid_vertex_rejected():
    ds = DynamicSparsifier(3, 8)
    with pytest.raises(ValueError):
        ds.add([0], [3], 1.0)


def test_delete_only_edge_and_repeat():
    ds = DynamicSparsifier(3, 8)
    eid = ds.add([0], [1], 2.0)
    ds.delete(eid)
    assert ds.live_count == 0 and ds.output_sparsifier().m == 0
    assert all(e is None for e in ds.engines)
    with pytest.raises(UnknownEdgeError):
        ds.delete(eid)
    with pytest.raises(UnknownEdgeError):
        ds.delete_batch([eid])


def test_duplicate_ids_in_batch():
    ds = DynamicSparsifier(6, 8)
    a, b = ds.add_batch(specs(2))
    with pytest.raises(ValueError):
        ds.delete_batch([a, a])


def test_batch_of_one_is_add():
    a = DynamicSparsifier(6, 256, forced(seed=3))
    b = DynamicSparsifier(6, 256, forced(seed=3))
    for tail, head, w in specs(40):
        a.add(tail, head, w)
        b.add_batch([(tail, head, w)])
    assert a.level_parts() == b.level_parts()
    assert a.rebuilds == b.rebuilds and sizes(a) == sizes(b)


def test_full_batch_rebuilds_top_level_once():
    ds = DynamicSparsifier(8, 1024, forced(2))
    ds.add_batch(specs(1024, n=8))
    assert ds.rebuilds[1:] == [0] * 10 + [1]
    assert sizes(ds)[-1] == 1024
    ds.check_invariants(deep=True)


def test_delete_batch_spanning_three_levels():
    ds = DynamicSparsifier(6, 64, forced())
    ids = [ds.add(*s) for s in specs(7)]
    assert sizes(ds)[:3] == [1, 2, 4]
    victims = [ids[0], ids[4], ids[6]]
    assert {ds.owner[v] for v in victims} == {1, 2, 3}
    ref = DynamicSparsifier(6, 64, forced())
    for s in specs(7):
        ref.add(*s)
    for v in sorted(victims):
        ref.delete(v)
    for sched in ("seq", "par"):
        other = DynamicSparsifier(6, 64, forced(), scheduler=sched)
        for s in specs(7):
            other.add(*s)
        other.delete_batch(victims)
        assert other.level_parts() == ref.level_parts()
        assert sizes(other) == [0, 1, 3] + [0] * (other.K - 3)
        other.check_invariants(deep=True)


def test_fresh_stats_are_zero():
    st_ = DynamicSparsifier(4, 16).stats()
    assert st_.updates == 0 and st_.amortized_us == 0.0 and st_.live_m == 0
    assert st_.sparsifier_size == 0 and sum(st_.rebuilds) == 0


@pytest.mark.parametrize("p", [3, 6, 9])
def test_rebuild_frequency_follows_counter(p):
    ds = DynamicSparsifier(6, 2**p, forced(2))
    for s in specs(2**p):
        ds.add(*s)
    expected = Counter(counter_level(t) for t in range(1, 2**p + 1))
    assert ds.rebuilds[1:] == [expected.get(i, 0) for i in range(1, ds.K + 1)]
    assert ds.rebuilds[p + 1] == 1


def test_adds_then_deletes_empty_out():
    ds = DynamicSparsifier(6, 128, forced())
    ids = [ds.add(*s) for s in specs(100)]
    for eid in ids:
        ds.delete(eid)
    s = ds.stats()
    assert s.live_m == 0 and s.updates == 200 and s.adds == 100 and s.deletes == 100
    assert ds.output_sparsifier().m == 0
    ds.check_invariants(deep=True)


def test_unforced_output_is_live_graph():
    ds = DynamicSparsifier(6, 512)
    ids = ds.add_batch(specs(300))
    ds.delete_batch(ids[::4])
    assert ds.output_sparsifier() == ds.live_edges()


def test_output_is_sum_of_levels_exactly(rng):
    ds = DynamicSparsifier(6, 512, forced(1, 4))
    ids = [ds.add(*s) for s in specs(300)]
    ds.delete_batch(ids[:50])
    x = rng.standard_normal(6)
    total = sum((energy(ds.level_sparsifier(i), x, exact=True) for i in range(1, ds.K + 1)), Fraction(0))
    assert energy(ds.output_sparsifier(), x, exact=True) == total


# --- random operation sequences ---------------------------------------------

ops = st.lists(
    st.one_of(
        st.tuples(st.just("add"), st.integers(1, 9)),
        st.tuples(st.just("del"), st.integers(1, 6)),
    ),
    max_size=40,
)


@given(ops, st.integers(0, 2**32), st.sampled_from([0, 1, 2]), st.data())
def test_invariants_under_random_ops(seq, seed, lam, data):
    ds = DynamicSparsifier(5, 64, forced(lam, seed))
    rng = np.random.default_rng(seed)
    for kind, k in seq:
        if kind == "add":
            k = min(k, ds.max_m - ds.live_count)
            if k:
                ds.add_batch(random_edge_specs(5, k, 3, rng))
        else:
            live = sorted(ds.owner)
            if live:
                victims = data.draw(st.lists(st.sampled_from(live), unique=True, min_size=1, max_size=k))
                ds.delete_batch(victims)
        ds.check_invariants(deep=True)
        assert max(ds.owner.values(), default=1) <= ds.i_last <= ds.K


@given(ops, st.integers(0, 2**32), st.data())
def test_batched_deletes_match_singles(seq, seed, data):
    a = DynamicSparsifier(5, 64, forced(1, seed))
    b = DynamicSparsifier(5, 64, forced(1, seed), scheduler="par")
    rng = np.random.default_rng(seed)
    for kind, k in seq:
        if kind == "add":
            k = min(k, a.max_m - a.live_count)
            if k:
                batch = random_edge_specs(5, k, 3, rng)
                a.add_batch(batch)
                b.add_batch(batch)
        elif a.owner:
            victims = data.draw(st.lists(st.sampled_from(sorted(a.owner)), unique=True, min_size=1, max_size=k))
            for v in sorted(victims):
                a.delete(v)
            b.delete_batch(victims)
        assert a.level_parts() == b.level_parts()
