"""
A fully dynamic stream
======================

Insertions are grouped by a binary counter: level i holds at most 2**i
edges and is rebuilt from scratch when the counter carries into it.
"""

from hypersparse import DynamicSparsifier, SparsifyConfig
from hypersparse.formats import AddOp
from hypersparse.generate import random_stream

ds = DynamicSparsifier(12, 1024, SparsifyConfig(mstar_override=0, lambda_override=2, seed=2))

for op in random_stream(12, 4, 5000, seed=2, p_add=0.6, max_m=1024):
    if isinstance(op, AddOp):
        ds.add(op.tail, op.head, op.weight)
    else:
        ds.delete(op.edge_id)

print(ds)
stats = ds.stats()
print("rebuilds per level:", stats.rebuilds)
print("edges moved by merges:", stats.edges_moved)
print(f"live {stats.live_m}, sparsifier {stats.sparsifier_size}, {stats.amortized_us:.1f} us/update")
ds.check_invariants(deep=True)
