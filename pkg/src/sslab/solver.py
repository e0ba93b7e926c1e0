"""Output-sensitive Subset Sum: FastSubsetSum plus the wrapper that estimates
the output size recursively."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .coloring import combine_arrays, random_partition
from .core import ItemMultiset, PointSet, bellman_arrays, in_box, preprocess_items
from .counters import WorkCounters, debug_asserts
from .prefix import PrefixConfig
from .sumset import SumsetEngineConfig, sumset_arrays


class DepthExceeded(RuntimeError):
    pass


class RetryExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    k_const: float = 8          # K = ceil(k_const * log2 s + log2 d); 100 is the analysed value
    base_n: int = 16
    base_t: int = 64
    seed: int = 0
    depth_cap_const: float = 400
    small_exponent: int = 5     # small items are those <= t / K^small_exponent
    max_retries: int = 3
    engine: SumsetEngineConfig = field(default_factory=SumsetEngineConfig)
    prefix: Optional[PrefixConfig] = None

    def __post_init__(self):
        if self.k_const < 1 or self.base_n < 1 or self.base_t < 1:
            raise ValueError("k_const, base_n and base_t must all be >= 1")
        if self.small_exponent < 1:
            raise ValueError("small_exponent must be >= 1")

    def prefix_cfg(self) -> PrefixConfig:
        return self.prefix if self.prefix is not None else PrefixConfig(engine=self.engine)


def num_buckets(s: int, d: int, k_const: float) -> int:
    # K >= 2 so that (1 + 1/K) t / K < t and the recursion shrinks
    return max(2, math.ceil(k_const * math.log2(max(1, s)) + math.log2(d)))


def estimate_s(s1: int, s2: int, n: int, d: int) -> int:
    """Upper bound s1^(4d) * s2^(4d) * n^(4d) on |S(X, t)|."""
    return (s1 * s2 * n) ** (4 * d)


def depth_cap(n: int, const: float) -> int:
    return math.ceil(const * math.log2(max(2, n)))


def _split_small(X: ItemMultiset, t: Fraction, K: int, e: int):
    """Small items have every coordinate <= t / K^e."""
    scale = K ** e
    small, large = [], []
    for point, mult in X.items:
        if all(v * scale <= t for v in point):
            small.append((point, mult))
        else:
            large.append((point, mult))
    return ItemMultiset(X.dim, tuple(small)), ItemMultiset(X.dim, tuple(large))


def _base_case(X: ItemMultiset, T: int, counters: WorkCounters) -> np.ndarray:
    out = bellman_arrays(X.copies(), T, X.dim)
    counters.base_work += X.n * out.shape[0]
    return out


def _fast(X: ItemMultiset, t: Fraction, s: int, cfg: SolverConfig, counters: WorkCounters,
          depth: int, ss: np.random.SeedSequence, cap: int) -> np.ndarray:
    counters.max_depth = max(counters.max_depth, depth)
    if depth > cap:
        raise DepthExceeded(f"recursion depth {depth} exceeds {cap}")
    T = math.floor(t)
    d = X.dim
    if X.n <= cfg.base_n or T <= cfg.base_t:
        return _base_case(X, T, counters)

    K = num_buckets(min(s, (T + 1) ** d), d, cfg.k_const)
    XS, XL = _split_small(X, t, K, cfg.small_exponent)

    z = np.zeros((1, d), dtype=np.int64)
    if XS.n:
        child_t = (1 + Fraction(1, K)) * t / K
        child_T = math.floor(child_t)
        parts = random_partition(XS, K, ss)
        seeds = ss.spawn(K)
        for part, child_ss in zip(parts, seeds):
            if part.n == 0:
                continue
            zk = _fast(preprocess_items(part, child_T, d), child_t, s, cfg, counters,
                       depth + 1, child_ss, cap)
            assert zk.shape[0] == 0 or zk.max() <= child_T
            z = sumset_arrays(z, zk, cfg.engine, counters)
    folded = z.shape[0]
    z = z[in_box(z, T)]

    out = combine_arrays(z, XL, T, Fraction(1, K ** cfg.small_exponent),
                         cfg.prefix_cfg(), counters)
    if debug_asserts() and XS.n:
        # sub-multiplicativity: |A_1 + ... + A_K| <= |S(X, t)|^(K/(K-1))
        assert folded ** (K - 1) <= out.shape[0] ** K, "fold larger than sub-multiplicativity allows"
    return out


def _fast_with_retries(X, t, s, cfg, counters, ss) -> np.ndarray:
    cap = depth_cap(X.n, cfg.depth_cap_const)
    attempts = ss.spawn(cfg.max_retries + 1)
    for attempt in attempts:
        try:
            return _fast(X, t, s, cfg, counters, 0, attempt, cap)
        except DepthExceeded:
            counters.retries += 1
    raise RetryExhausted(f"depth guard violated on {cfg.max_retries + 1} attempts")


def fast_subset_sum(X: ItemMultiset, t, s: int, cfg: Optional[SolverConfig] = None,
                    counters: Optional[WorkCounters] = None) -> PointSet:
    """S(X, floor(t)) with high probability, provided s >= |S(X, floor(t))|.

    Never reports a value that is not a subset sum.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    cfg = cfg or SolverConfig()
    counters = counters if counters is not None else WorkCounters()
    t = Fraction(t)
    X = preprocess_items(X, math.floor(t), X.dim)
    ss = np.random.SeedSequence(cfg.seed)
    return PointSet.from_array(_fast_with_retries(X, t, s, cfg, counters, ss))


def _solve(X: ItemMultiset, t: Fraction, cfg: SolverConfig, counters: WorkCounters,
           ss: np.random.SeedSequence) -> np.ndarray:
    T = math.floor(t)
    d = X.dim
    if X.n <= cfg.base_n or T <= cfg.base_t:
        return _base_case(X, T, counters)
    left, right, rest = ss.spawn(3)
    X1, X2 = X.split_half()
    half = t / 2
    s1 = _solve(preprocess_items(X1, math.floor(half), d), half, cfg, counters, left).shape[0]
    s2 = _solve(preprocess_items(X2, math.floor(half), d), half, cfg, counters, right).shape[0]
    s = estimate_s(s1, s2, X.n, d)
    return _fast_with_retries(X, t, s, cfg, counters, rest)


def solve(X: ItemMultiset, t: int, cfg: Optional[SolverConfig] = None,
          counters: Optional[WorkCounters] = None) -> PointSet:
    """S(X, t) with high probability, without being told its size."""
    cfg = cfg or SolverConfig()
    counters = counters if counters is not None else WorkCounters()
    X = preprocess_items(X, int(t), X.dim)
    ss = np.random.SeedSequence(cfg.seed)
    return PointSet.from_array(_solve(X, Fraction(int(t)), cfg, counters, ss))


def decide(X: ItemMultiset, t: int, cfg: Optional[SolverConfig] = None) -> bool:
    """Whether the all-t point is a subset sum."""
    return (int(t),) * X.dim in solve(X, t, cfg)
