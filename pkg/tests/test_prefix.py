import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sslab import Box, PointSet, prefix_restricted_sumset, sumset
from sslab.counters import WorkCounters
from sslab.prefix import _budget, build_block_partition, build_partition_arrays, prefilter_compatible

from helpers import brute_box_sumset


def P(vals):
    return PointSet([(v,) for v in vals])


def test_prefilter_examples():
    a, b = prefilter_compatible(P([5, 6]), P([5, 6]), Box(1, 10, 1))
    assert a.to_list() == [(5,)] and b.to_list() == [(5,)]
    A, B = P([3, 50]), P([7, 90])
    assert prefilter_compatible(A, B, Box(1, 10, 0)) == (A, B)
    a, b = prefilter_compatible(P([20]), P([20]), Box(1, 10, 1))
    assert len(a) == 0 and len(b) == 0


def test_partition_single_pivot_is_one_heavy_block():
    B = PointSet([(4, i) for i in range(6)])
    part = build_block_partition(PointSet([(1, 0), (2, 0)]), B, 4, Box(2, 10, 1))
    assert len(part.bblocks) == 1 and part.bblocks[0][2] is True


def test_partition_distinct_values_all_light():
    part = build_block_partition(P([0, 1]), P(range(8)), 8, Box(1, 100, 1))
    assert all(not heavy for _, _, heavy, _ in part.bblocks)
    assert all(end - start <= 2 for start, end, _, _ in part.bblocks)


def test_partition_subdivides_at_pivot_threshold():
    B = PointSet([(9, i) for i in range(4)])
    A = PointSet([(v, 0) for v in range(4)])
    part = build_block_partition(A, B, 2, Box(2, 10, 1))
    blocks = [part.avals[s:e].tolist() for s, e in part.ablocks]
    assert blocks == [[0, 1], [2, 3]]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 60), min_size=1, max_size=60),
       st.lists(st.integers(0, 20), min_size=1, max_size=60),
       st.integers(2, 16), st.integers(0, 80))
def test_partition_properties(avals, bvals, g, t):
    a = np.sort(np.array(avals))
    b = np.sort(np.array(bvals))
    part = build_partition_arrays(a, b, g, t)
    la, lb = math.ceil(2 * len(a) / g), math.ceil(2 * len(b) / g)
    # blocks tile both sequences in order
    assert [s for s, _ in part.ablocks] == [0] + [e for _, e in part.ablocks[:-1]]
    assert part.ablocks[-1][1] == len(a)
    assert [s for s, *_ in part.bblocks] == [0] + [e for _, e, *_ in part.bblocks[:-1]]
    assert part.bblocks[-1][1] == len(b)
    assert all(e - s <= la for s, e in part.ablocks)
    pivots = []
    for j, (s, e, heavy, z) in enumerate(part.bblocks):
        if heavy:
            assert set(b[s:e].tolist()) == {z}
            assert (e - s) * g >= 2 * len(b)
            pivots.append(z)
        else:
            assert e - s <= lb or len(set(b[s:e].tolist())) == 1
        # equal values never split across blocks
        if j > 0:
            assert b[s] != b[s - 1]
    # no A-block straddles a pivot threshold t - z
    for z in pivots:
        for i in range(len(part.ablocks)):
            assert not (part.amin(i) <= t - z < part.amax(i))
    assert len(part.bblocks) <= 2 * g


def test_shifted_pair_gives_empty_restricted_sumset():
    n, t = 8, 1000
    A = P([t // 2 + i for i in range(1, n + 1)])
    B = P([t // 2 + n * j for j in range(1, n + 1)])
    assert len(prefix_restricted_sumset(A, B, Box(1, t, 1))) == 0
    assert len(sumset(A, B)) == 64


def test_small_examples():
    A = P(range(4))
    assert prefix_restricted_sumset(A, A, Box(1, 4, 1)).to_list() == [(v,) for v in range(5)]
    X, Y = P([3, 70, 200]), P([1, 900])
    assert prefix_restricted_sumset(X, Y, Box(1, 10, 0)) == sumset(X, Y)


def test_random_sweep_with_debug_checks(monkeypatch):
    monkeypatch.setenv("SSLAB_DEBUG_ASSERTS", "1")
    rng = np.random.default_rng(21)
    for _ in range(300):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(0, d + 1))
        t = int(rng.integers(1, 257))
        A = [tuple(int(v) for v in rng.integers(0, t + 1, size=d)) for _ in range(rng.integers(0, 40))]
        # clustered B values force pivots
        B = [tuple(int(v) for v in rng.choice([0, t // 3, t // 2, t], size=d)) for _ in range(rng.integers(0, 40))]
        got = prefix_restricted_sumset(PointSet(A, d), PointSet(B, d), Box(d, t, k))
        assert got.to_list() == brute_box_sumset(set(A), set(B), t, k)


def test_completed_runs_stay_within_budget_of_twice_output():
    rng = np.random.default_rng(22)
    c = WorkCounters(pr_trace=[])
    for _ in range(200):
        d = int(rng.integers(1, 4))
        t = int(rng.integers(1, 200))
        A = PointSet([tuple(int(v) for v in rng.integers(0, t + 1, size=d)) for _ in range(50)])
        B = PointSet([tuple(int(v) for v in rng.integers(0, t + 1, size=d)) for _ in range(50)])
        prefix_restricted_sumset(A, B, Box(d, t, int(rng.integers(1, d + 1))), counters=c)
    assert c.pr_trace
    for na, nb, k, d, s, work, size in c.pr_trace:
        assert work <= _budget(na, nb, max(2, 2 * size), k, d, 64)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        prefix_restricted_sumset(P([1]), PointSet([(1, 1)]), Box(1, 5, 1))
