"""Output-sensitive Subset Sum in fixed dimension, with exact oracles."""
from .core import Box, ItemMultiset, PointSet, bellman, naive_oracle, preprocess_items, unbounded_oracle
from .prefix import PrefixConfig, prefix_restricted_sumset
from .solver import SolverConfig, decide, fast_subset_sum, solve
from .sumset import SumsetEngineConfig, sumset
from .unbounded import fast_unbounded

__all__ = [
    "Box", "ItemMultiset", "PointSet", "PrefixConfig", "SolverConfig", "SumsetEngineConfig",
    "bellman", "decide", "fast_subset_sum", "fast_unbounded", "naive_oracle",
    "prefix_restricted_sumset", "preprocess_items", "solve", "sumset", "unbounded_oracle",
]
