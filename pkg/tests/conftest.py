import numpy as np
import pytest
from hypothesis import settings, strategies as st

from hypersparse import Hyperedge, Hypergraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# dyadic weights keep float arithmetic exact in the tests that need it
weights = st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0])


@st.composite
def hypergraphs(draw, max_n=6, max_m=12, weight=weights):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    verts = st.sets(st.integers(0, n - 1), min_size=1, max_size=n)
    edges = [Hyperedge(i, draw(verts), draw(verts), draw(weight)) for i in range(m)]
    return Hypergraph(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
