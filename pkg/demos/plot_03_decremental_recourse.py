"""
Deleting edges one at a time
============================

The decremental structure keeps the level stack alive under deletions.  A
deleted edge touches each level at most once, so the number of levels
bounds how far a single deletion travels.
"""

from collections import Counter

import numpy as np

from hypersparse import DecrementalSparsifier, SparsifyConfig
from hypersparse.generate import random_hypergraph

H = random_hypergraph(16, 4096, 4, seed=4)
ds = DecrementalSparsifier(H, SparsifyConfig(mstar_override=0, lambda_override=2, seed=4))
print("levels:", ds.i_last, " sparsifier size:", ds.sparsifier_size())

travel = Counter()
recourse = []
for eid in np.random.default_rng(0).permutation(H.m)[:3000]:
    rep = ds.delete(int(eid))
    travel[rep.deletions_propagated] += 1
    recourse.append(rep.recourse)

# how many levels past the first each deletion reached
print("propagation histogram:", dict(sorted(travel.items())))
print("mean recourse per deletion:", np.mean(recourse))
print("sparsifier size now:", ds.sparsifier_size(), "live edges:", ds.live_count)
ds.check_invariants()
