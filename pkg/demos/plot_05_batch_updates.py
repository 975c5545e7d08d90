"""
Batched updates
===============

A batch of deletions gives the same structure as deleting the ids one by
one in ascending order; each level's share runs as a separate task.  A
batch of insertions advances the counter by its size and rebuilds once.
"""

import numpy as np

from hypersparse import DynamicSparsifier, SparsifyConfig
from hypersparse.formats import dumps_dhg
from hypersparse.generate import random_edge_specs

cfg = SparsifyConfig(mstar_override=0, lambda_override=2, seed=5)
rng = np.random.default_rng(5)
specs = random_edge_specs(10, 700, 4, rng)
victims = sorted(int(v) for v in rng.choice(700, 250, replace=False))

one_by_one = DynamicSparsifier(10, 1024, cfg)
one_by_one.add_batch(specs)
for eid in victims:
    one_by_one.delete(eid)

batched = DynamicSparsifier(10, 1024, cfg, scheduler="par")
batched.add_batch(specs)
batched.delete_batch(victims[::-1])

same = dumps_dhg(one_by_one.output_sparsifier()) == dumps_dhg(batched.output_sparsifier())
print("identical sparsifiers:", same)
print("rebuilds after one 700-edge batch:", batched.stats().rebuilds)
