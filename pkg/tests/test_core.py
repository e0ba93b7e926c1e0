import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sslab import Box, ItemMultiset, PointSet, bellman, naive_oracle, preprocess_items, unbounded_oracle
from sslab.core import NAIVE_MAX_ITEMS
from sslab.sumset import SumsetEngineConfig, sumset

from helpers import as_ints, brute_subset_sums, multiset, random_items


def test_preprocess_drops_item_above_target():
    assert preprocess_items([5], 4, 1).n == 0


def test_preprocess_caps_multiplicity():
    X = preprocess_items([1, 1, 1, 1], 2, 1)
    assert X.items == (((1,), 2),)


def test_preprocess_cap_uses_largest_coordinate():
    X = preprocess_items([(1, 3), (1, 3), (2, 2)], 3, 2)
    assert X.items == (((1, 3), 1), ((2, 2), 1))


def test_preprocess_rejects_negative_and_bad_dim():
    with pytest.raises(ValueError):
        preprocess_items([-1], 4, 1)
    with pytest.raises(ValueError):
        preprocess_items([1], 4, 0)


def test_preprocess_drops_zero_vector():
    assert preprocess_items([(0, 0), (1, 0)], 3, 2).items == (((1, 0), 1),)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 40), max_size=12), st.integers(0, 40))
def test_preprocess_idempotent(xs, t):
    once = preprocess_items(xs, t, 1)
    assert preprocess_items(once, t, 1) == once


def test_bellman_examples():
    assert as_ints(bellman(multiset([]), 5)) == [0]
    assert as_ints(bellman(multiset([1, 2]), 3)) == [0, 1, 2, 3]
    # frozen from brute enumeration: 3+3=6, 3+3+... capped at 7
    assert as_ints(bellman(multiset([3, 3]), 7)) == [0, 3, 6]
    assert [p[0] for p in brute_subset_sums([3, 3], 7)] == [0, 3, 6]


def test_naive_oracle_examples():
    assert as_ints(naive_oracle(multiset([2]), 1)) == [0]
    assert as_ints(naive_oracle(multiset([1, 2, 4]), 7)) == list(range(8))
    got = naive_oracle(multiset([(1, 0), (0, 1)], 2), 1).to_list()
    assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_naive_oracle_guard():
    X = multiset([1] * (NAIVE_MAX_ITEMS + 1))
    with pytest.raises(ValueError):
        naive_oracle(X, 100)


def test_unbounded_oracle_examples():
    assert as_ints(unbounded_oracle(multiset([2]), 7)) == [0, 2, 4, 6]
    assert as_ints(unbounded_oracle(multiset([3, 5]), 11)) == [0, 3, 5, 6, 8, 9, 10, 11]
    assert as_ints(unbounded_oracle(multiset([1]), 5)) == [0, 1, 2, 3, 4, 5]


def test_bellman_matches_naive_sweep():
    rng = np.random.default_rng(11)
    for _ in range(200):
        d = int(rng.integers(1, 3))
        t = int(rng.integers(0, 65))
        items = random_items(rng, int(rng.integers(0, 13)), t, d)
        X = preprocess_items(items, t, d)
        B = bellman(X, t)
        assert B == naive_oracle(X, t)
        assert (0,) * d in B


def test_naive_matches_itertools_reference():
    rng = np.random.default_rng(12)
    for _ in range(40):
        d = int(rng.integers(1, 3))
        t = int(rng.integers(1, 30))
        items = random_items(rng, int(rng.integers(0, 9)), t, d)
        X = ItemMultiset.from_points(items, d)
        assert naive_oracle(X, t).to_list() == brute_subset_sums(items, t, d)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(0, 30), min_size=1, max_size=8), min_size=2, max_size=5))
def test_sumset_size_lower_bound(sets):
    arrs = [PointSet([(v,) for v in s]) for s in sets]
    acc = PointSet.zero()
    for A in arrs:
        acc = sumset(acc, A, SumsetEngineConfig(engine="dense"))
    assert sum(len(A) for A in arrs) <= len(acc) + len(arrs) - 1


def test_pointset_canonical_and_membership():
    S = PointSet([(3, 1), (1, 2), (3, 1)])
    assert S.to_list() == [(1, 2), (3, 1)]
    assert (3, 1) in S and (2, 2) not in S
    assert S == PointSet([(1, 2), (3, 1)])


def test_box_mask():
    box = Box(2, 5, 1)
    arr = np.array([[5, 100], [6, 0]])
    assert box.mask(arr).tolist() == [True, False]
    with pytest.raises(ValueError):
        Box(2, 5, 3)
