"""Prefix-restricted sumsets C = (A + B) ∩ [0..t]^k x [0..inf)^(d-k).

The cap is peeled off one coordinate at a time.  For the last capped
coordinate both inputs are cut into blocks along that coordinate; every pair
of blocks whose minima still fit under t is solved with one cap fewer.  Pairs
that fit entirely (totally relevant) recurse, the at most one straddling pair
per chain is enumerated directly.  The block count g depends on a guess of
|C|; guesses double whenever the work counter runs over its budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Box, PointSet, canon, in_box
from .counters import WorkCounters, debug_asserts
from .sumset import SumsetEngineConfig, direct_sumset, sumset_arrays

PREFILTER_CHUNK = 1 << 20


@dataclass(frozen=True)
class PrefixConfig:
    engine: SumsetEngineConfig = field(default_factory=SumsetEngineConfig)
    budget_const: int = 64
    block_const: int = 2
    # below these pair counts enumerate directly instead of partitioning/convolving
    direct_cutoff: int = 0
    leaf_direct: int = 64


@dataclass
class BlockPartition:
    coord: int
    t: int
    g: int
    ablocks: list[tuple[int, int]]
    bblocks: list[tuple[int, int, bool, Optional[int]]]  # (start, end, heavy, pivot)
    avals: np.ndarray = field(repr=False)
    bvals: np.ndarray = field(repr=False)

    def amin(self, i: int) -> int:
        return int(self.avals[self.ablocks[i][0]])

    def amax(self, i: int) -> int:
        return int(self.avals[self.ablocks[i][1] - 1])

    def bmin(self, j: int) -> int:
        return int(self.bvals[self.bblocks[j][0]])

    def bmax(self, j: int) -> int:
        return int(self.bvals[self.bblocks[j][1] - 1])


class _BudgetExceeded(Exception):
    pass


# -- prefilter ----------------------------------------------------------------

def _compatible(a: np.ndarray, b: np.ndarray, t: int, k: int) -> np.ndarray:
    """Mask of rows x of ``a`` with some y in ``b`` such that x + y is capped-in."""
    if b.shape[0] == 0:
        return np.zeros(a.shape[0], dtype=bool)
    if k == 0:
        return np.ones(a.shape[0], dtype=bool)
    if k == 1:
        return a[:, 0] + b[:, 0].min() <= t
    if k == 2:
        order = np.argsort(b[:, 0], kind="stable")
        b0 = b[order, 0]
        prefmin = np.minimum.accumulate(b[order, 1])
        idx = np.searchsorted(b0, t - a[:, 0], side="right")
        ok = idx > 0
        ok[ok] = prefmin[idx[ok] - 1] <= t - a[ok, 1]
        return ok
    # k >= 3: brute force in chunks bounding the temporary to PREFILTER_CHUNK cells
    step = max(1, PREFILTER_CHUNK // max(1, b.shape[0] * k))
    out = np.empty(a.shape[0], dtype=bool)
    bk = b[None, :, :k]
    for lo in range(0, a.shape[0], step):
        chunk = a[lo:lo + step, None, :k]
        out[lo:lo + step] = np.all(chunk + bk <= t, axis=2).any(axis=1)
    return out


def prefilter_arrays(a: np.ndarray, b: np.ndarray, t: int, k: int):
    return a[_compatible(a, b, t, k)], b[_compatible(b, a, t, k)]


def prefilter_compatible(A: PointSet, B: PointSet, box: Box) -> tuple[PointSet, PointSet]:
    if A.dim != B.dim or A.dim != box.dim:
        raise ValueError("dimension mismatch")
    a, b = prefilter_arrays(A.array, B.array, box.t, box.capped)
    return PointSet.from_array(a), PointSet.from_array(b)


# -- block partition ---------------------------------------------------------------

def build_partition_arrays(avals: np.ndarray, bvals: np.ndarray, g: int, t: int,
                           coord: int = 0, block_const: int = 2) -> BlockPartition:
    """Partition on already sorted coordinate values of A and B."""
    if g < 2:
        raise ValueError("g must be >= 2")
    na, nb = avals.shape[0], bvals.shape[0]
    la = max(1, math.ceil(block_const * na / g))
    lb = max(1, math.ceil(block_const * nb / g))

    vals, starts, counts = np.unique(bvals, return_index=True, return_counts=True)
    is_pivot = counts * g >= block_const * nb

    bounds = set(range(0, na, la))
    for z in vals[is_pivot].tolist():
        pos = int(np.searchsorted(avals, t - z, side="right"))
        if 0 < pos < na:
            bounds.add(pos)
    cuts = sorted(bounds) + [na]
    ablocks = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)] if na else []

    bblocks: list[tuple[int, int, bool, Optional[int]]] = []
    cur_start, cur_end = None, None
    for z, st, cnt, piv in zip(vals.tolist(), starts.tolist(), counts.tolist(), is_pivot.tolist()):
        if piv:
            if cur_start is not None:
                bblocks.append((cur_start, cur_end, False, None))
                cur_start = None
            bblocks.append((st, st + cnt, True, z))
            continue
        if cur_start is not None and (cur_end - cur_start) + cnt > lb:
            bblocks.append((cur_start, cur_end, False, None))
            cur_start = None
        if cur_start is None:
            cur_start = st
        cur_end = st + cnt
    if cur_start is not None:
        bblocks.append((cur_start, cur_end, False, None))
    return BlockPartition(coord, t, g, ablocks, bblocks, avals, bvals)


def build_block_partition(A: PointSet, B: PointSet, g: int, box: Box,
                          block_const: int = 2) -> BlockPartition:
    """Block partition of A and B along the last capped coordinate.

    Block ranges index into A and B sorted (stably) by that coordinate.
    """
    coord = box.capped - 1
    if coord < 0:
        raise ValueError("partition needs at least one capped coordinate")
    avals = np.sort(A.array[:, coord], kind="stable")
    bvals = np.sort(B.array[:, coord], kind="stable")
    return build_partition_arrays(avals, bvals, g, box.t, coord, block_const)


# -- main recursion ------------------------------------------------------------------

def _budget(na: int, nb: int, s: int, k: int, d: int, const: int) -> float:
    nab = na * nb
    e = 1.0 / (k + 1)
    return const * (na + nb + nab ** (1 - e) * s ** e) * max(1.0, math.log2(nab)) ** (2 * d)


def _check_chains(part: BlockPartition, pieces: dict, partial: list) -> None:
    chains: dict[int, list] = {}
    for (i, j), arr in pieces.items():
        chains.setdefault(i - j, []).append(arr)
    for delta, arrs in chains.items():
        total = sum(x.shape[0] for x in arrs)
        union = canon(np.vstack(arrs), arrs[0].shape[1]).shape[0]
        assert total == union, f"chain {delta} outputs overlap"
    per_chain: dict[int, int] = {}
    for i, j in partial:
        per_chain[i - j] = per_chain.get(i - j, 0) + 1
        assert not part.bblocks[j][2], "straddling pair with a heavy block"
    assert all(c <= 1 for c in per_chain.values()), "two straddling pairs on one chain"


def _run(a, b, t, k, g, budget, cfg, counters, debug):
    coord = k - 1
    part = build_partition_arrays(a[:, coord], b[:, coord], g, t, coord, cfg.block_const)
    work = a.shape[0] + b.shape[0] + len(part.ablocks) + len(part.bblocks)
    out = []
    pieces: dict = {}
    partial = []
    bmins = [part.bmin(j) for j in range(len(part.bblocks))]
    bmaxs = [part.bmax(j) for j in range(len(part.bblocks))]
    for i, (a0, a1) in enumerate(part.ablocks):
        amin, amax = part.amin(i), part.amax(i)
        for j, (b0, b1, _, _) in enumerate(part.bblocks):
            if amin + bmins[j] > t:
                break
            ai, bj = a[a0:a1], b[b0:b1]
            if amax + bmaxs[j] <= t:
                c = _prefix(ai, bj, t, k - 1, cfg, counters, debug)
                c = c[c[:, coord] <= t]
                work += c.shape[0]
                if debug:
                    pieces[(i, j)] = c
            else:
                c = direct_sumset(ai, bj)
                c = c[in_box(c, t, k)]
                work += ai.shape[0] * bj.shape[0]
                if debug:
                    partial.append((i, j))
            out.append(c)
            if budget is not None and work > budget:
                counters.pr_work += work
                raise _BudgetExceeded
    counters.pr_work += work
    if debug:
        _check_chains(part, pieces, partial)
    if not out:
        return np.zeros((0, a.shape[1]), dtype=np.int64), work
    return canon(np.vstack(out), a.shape[1]), work


def _prefix(a: np.ndarray, b: np.ndarray, t: int, k: int, cfg: PrefixConfig,
            counters: WorkCounters, debug: bool) -> np.ndarray:
    counters.pr_nodes += 1
    d = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    if k == 0:
        if a.shape[0] * b.shape[0] <= cfg.leaf_direct:
            return direct_sumset(a, b)
        return sumset_arrays(a, b, cfg.engine, counters)
    a, b = prefilter_arrays(a, b, t, k)
    na, nb = a.shape[0], b.shape[0]
    if na == 0 or nb == 0:
        return np.zeros((0, d), dtype=np.int64)
    if na * nb <= cfg.direct_cutoff:
        counters.pr_work += na * nb
        c = direct_sumset(a, b)
        return c[in_box(c, t, k)]
    coord = k - 1
    a = a[np.argsort(a[:, coord], kind="stable")]
    b = b[np.argsort(b[:, coord], kind="stable")]
    nab = na * nb
    # with one capped coordinate every a in A' plus a fixed b of minimal
    # coordinate gives distinct sums, so |C| >= max(|A'|, |B'|)
    s = max(2, na, nb) if k == 1 else 2
    while True:
        g = max(2, math.ceil((nab / s) ** (1.0 / (k + 1))))
        budget = None if s >= nab else _budget(na, nb, s, k, d, cfg.budget_const)
        try:
            c, work = _run(a, b, t, k, g, budget, cfg, counters, debug)
        except _BudgetExceeded:
            s *= 2
            continue
        if counters.pr_trace is not None:
            counters.pr_trace.append((na, nb, k, d, s, work, c.shape[0]))
        return c


def prefix_restricted_arrays(a: np.ndarray, b: np.ndarray, t: int, k: int,
                             cfg: Optional[PrefixConfig] = None,
                             counters: Optional[WorkCounters] = None) -> np.ndarray:
    if a.shape[1] != b.shape[1]:
        raise ValueError("dimension mismatch")
    cfg = cfg or PrefixConfig()
    counters = counters if counters is not None else WorkCounters()
    return _prefix(a, b, int(t), k, cfg, counters, debug_asserts())


def prefix_restricted_sumset(A: PointSet, B: PointSet, box: Box,
                             cfg: Optional[PrefixConfig] = None,
                             counters: Optional[WorkCounters] = None) -> PointSet:
    """Exactly (A + B) ∩ box."""
    if A.dim != B.dim or A.dim != box.dim:
        raise ValueError("dimension mismatch")
    return PointSet.from_array(
        prefix_restricted_arrays(A.array, B.array, box.t, box.capped, cfg, counters))
