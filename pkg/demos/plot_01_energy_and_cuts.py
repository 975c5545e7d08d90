"""
Energy and directed cuts
========================

A directed hyperedge pulls its tail above its head.  Its energy is the
squared gap between the largest tail value and the smallest head value,
and zero when the tail already sits below the head.
"""

import numpy as np

from hypersparse import directed_cut_value, energy, new_hypergraph
from hypersparse.hypergraph import indicator

# three vertices, one edge {a, b} -> {c} of weight 2
H = new_hypergraph(3, [({0, 1}, {2}, 2.0)])
print(energy(H, [3.0, 1.0, 0.0]))  # 2 * 3**2 = 18
print(energy(H, [0.0, 0.0, 5.0]))  # tail below head: 0

# On 0/1 vectors the energy counts the edges leaving a vertex set: tail
# touches the set, head is not inside it.
G = new_hypergraph(4, [({0}, {1, 2}, 1.0), ({1}, {3}, 2.0), ({3}, {0}, 4.0)])
for s in ({0}, {0, 1}, {0, 1, 2}, {3}):
    print(sorted(s), directed_cut_value(G, s), energy(G, indicator(4, s)))

# shifting every coordinate by the same amount changes nothing (up to rounding)
x = np.random.default_rng(0).standard_normal(4)
print(energy(G, x), energy(G, x + 7.0))
