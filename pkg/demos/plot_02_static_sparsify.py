"""
One-shot sparsification
=======================

Build a level stack on a random hypergraph and compare every cut of the
original with the sparsifier.
"""

from hypersparse import SparsifyConfig, spectral_sparsify
from hypersparse.generate import random_hypergraph
from hypersparse.verify import check_all_cuts

H = random_hypergraph(8, 2000, 4, seed=1)

# At this size the default recursion threshold is far above m, so the
# sparsifier is H itself.
bundle = spectral_sparsify(H, SparsifyConfig())
print("default:", bundle.i_last, "levels,", bundle.sparsifier.m, "edges")

# Forcing the recursion and keeping 8 edges per vertex pair shows the
# actual halving.
cfg = SparsifyConfig(mstar_override=0, lambda_override=8, seed=3)
bundle = spectral_sparsify(H, cfg)
for lvl in bundle.levels:
    print(f"level {lvl.level}: coreset {lvl.coreset.m:5d}  sample {lvl.sample.m:5d}")
print("sparsifier:", bundle.sparsifier.m, "of", H.m, "edges")

rep = check_all_cuts(H, bundle.sparsifier, eps=0.5)
print(f"cut ratios in [{rep.worst_ratio_low:.3f}, {rep.worst_ratio_high:.3f}], violations {rep.violations}")
