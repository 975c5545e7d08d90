"""Dynamic spectral sparsification of directed hypergraphs."""

from .decremental import DecrementalSparsifier, RecourseReport, UnknownEdgeError, init_decremental
from .dynamic import CapacityError, DynamicSparsifier, UpdateMetrics, new_dynamic
from .formats import FormatError, read_dhg, read_dhu, write_dhg
from .hypergraph import (
    Hyperedge,
    Hypergraph,
    directed_cut_value,
    energy,
    new_hypergraph,
    rank,
    union_disjoint,
)
from .pair_index import PairIndex, build_index
from .static import SparsifyConfig, coreset_and_sample, spectral_sparsify
from .verify import check_all_cuts, check_random_vectors, decomposability_check, sampling_unbiasedness

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DecrementalSparsifier",
    "DynamicSparsifier",
    "FormatError",
    "Hyperedge",
    "Hypergraph",
    "PairIndex",
    "RecourseReport",
    "SparsifyConfig",
    "UnknownEdgeError",
    "UpdateMetrics",
    "build_index",
    "check_all_cuts",
    "check_random_vectors",
    "coreset_and_sample",
    "decomposability_check",
    "directed_cut_value",
    "energy",
    "init_decremental",
    "new_dynamic",
    "new_hypergraph",
    "rank",
    "read_dhg",
    "read_dhu",
    "sampling_unbiasedness",
    "spectral_sparsify",
    "union_disjoint",
    "write_dhg",
]
