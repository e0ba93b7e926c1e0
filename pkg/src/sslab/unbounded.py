"""Deterministic Unbounded Subset Sum."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import ItemMultiset, PointSet, canon, in_box, preprocess_items, unbounded_oracle
from .counters import WorkCounters, debug_asserts
from .prefix import PrefixConfig, prefix_restricted_arrays
from .solver import SolverConfig, _split_small
from .sumset import SumsetEngineConfig, sumset_arrays

ANALYSED_K_CONST = 100


def _new_rows(cand: np.ndarray, z: np.ndarray, d: int) -> np.ndarray:
    """Rows of canonical ``cand`` not present in canonical ``z``."""
    if cand.shape[0] == 0 or z.shape[0] == 0:
        return cand
    both = np.vstack([z, cand])
    _, idx, counts = np.unique(both, axis=0, return_index=True, return_counts=True)
    fresh = idx[(counts == 1) & (idx >= z.shape[0])]
    return canon(both[fresh], d)


def _multiples(point: tuple, t: int) -> np.ndarray:
    x = np.array(point, dtype=np.int64)
    reps = min(t // v for v in point if v > 0)
    return np.arange(reps + 1, dtype=np.int64)[:, None] * x[None, :]


def _unbounded(X: ItemMultiset, t: Fraction, cfg: SolverConfig, engine: SumsetEngineConfig,
               pcfg: PrefixConfig, counters: WorkCounters) -> np.ndarray:
    T = math.floor(t)
    d = X.dim
    X = preprocess_items(X, T, d).as_set()
    if X.n == 0:
        return np.zeros((1, d), dtype=np.int64)
    if X.n == 1:
        return _multiples(X.items[0][0], T)
    if T <= cfg.base_t:
        out = unbounded_oracle(X, T).array
        counters.base_work += X.n * out.shape[0]
        return out

    K = max(2, math.ceil(cfg.k_const * math.log2(T) + math.log2(d)))
    XS, XL = _split_small(X, t, K, cfg.small_exponent)

    z = np.zeros((1, d), dtype=np.int64)
    if XS.n:
        z0 = _unbounded(XS, (1 + Fraction(1, K)) * t / K, cfg, engine, pcfg, counters)
        # Z <- Z + Z0 repeated K times; Z0 holds 0, so only new sums need extending
        frontier = z
        for _ in range(K):
            cand = sumset_arrays(frontier, z0, engine, counters)
            cand = cand[in_box(cand, T)]
            frontier = _new_rows(cand, z, d)
            if frontier.shape[0] == 0:
                break
            z = canon(np.vstack([z, frontier]), d)
        if debug_asserts() and cfg.k_const >= ANALYSED_K_CONST:
            assert K > math.log2(z.shape[0]) + math.log2(d)

    if XL.n:
        xl = XL.copies()
        frontier = z
        for _ in range(K ** cfg.small_exponent * d):
            # with 0 added to X_L the sets only grow, so extending the newest sums suffices
            cand = prefix_restricted_arrays(frontier, xl, T, d, pcfg, counters)
            frontier = _new_rows(cand, z, d)
            if frontier.shape[0] == 0:
                break
            z = canon(np.vstack([z, frontier]), d)
    return z


def fast_unbounded(X: ItemMultiset, t: int, cfg: Optional[SolverConfig] = None,
                   counters: Optional[WorkCounters] = None) -> PointSet:
    """S*(X, t), deterministically.  The seed in ``cfg`` is ignored."""
    cfg = cfg or SolverConfig()
    counters = counters if counters is not None else WorkCounters()
    # pinned seed: the output never depends on it, but the work counters would
    engine = SumsetEngineConfig(engine=cfg.engine.engine, seed=0,
                                width_bits=cfg.engine.width_bits,
                                dense_limit=cfg.engine.dense_limit)
    pcfg = cfg.prefix_cfg()
    pcfg = PrefixConfig(engine=engine, budget_const=pcfg.budget_const,
                        block_const=pcfg.block_const, direct_cutoff=pcfg.direct_cutoff,
                        leaf_direct=pcfg.leaf_direct)
    return PointSet.from_array(_unbounded(X, Fraction(int(t)), cfg, engine, pcfg, counters))
