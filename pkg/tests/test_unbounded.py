import numpy as np

from sslab import SolverConfig, bellman, fast_unbounded, preprocess_items, unbounded_oracle
from sslab.counters import WorkCounters

from helpers import as_ints, multiset, random_items

# k_const=1 with small_exponent=2 makes items small at desk-scale targets
SMALL_PATH = SolverConfig(base_t=1, k_const=1, small_exponent=2)


def test_examples():
    assert as_ints(fast_unbounded(multiset([3, 5]), 11)) == [0, 3, 5, 6, 8, 9, 10, 11]
    assert as_ints(fast_unbounded(multiset([1]), 4)) == [0, 1, 2, 3, 4]
    assert as_ints(fast_unbounded(multiset([]), 9)) == [0]


def test_matches_oracle_both_paths():
    rng = np.random.default_rng(51)
    for _ in range(120):
        d = int(rng.integers(1, 3))
        t = int(rng.integers(1, 513 if d == 1 else 40))
        X = multiset(random_items(rng, int(rng.integers(0, 11)), t // 3 + 1, d, lo=1), d)
        ref = unbounded_oracle(X, t)
        assert fast_unbounded(X, t, SolverConfig(base_t=1)) == ref
        assert fast_unbounded(X, t, SMALL_PATH) == ref


def test_seed_independent_and_repeatable():
    rng = np.random.default_rng(52)
    X = multiset(random_items(rng, 8, 60, 1, lo=1))
    outs = set()
    for seed in range(4):
        c = WorkCounters()
        S = fast_unbounded(X, 400, SolverConfig(base_t=1, seed=seed, k_const=1, small_exponent=2), c)
        outs.add((S.array.tobytes(), tuple(c.as_dict().items())))
    assert len(outs) == 1


def test_doubling_reduction():
    rng = np.random.default_rng(53)
    for _ in range(40):
        d = int(rng.integers(1, 3))
        t = int(rng.integers(1, 200 if d == 1 else 30))
        items = random_items(rng, int(rng.integers(0, 6)), t, d, lo=1)
        doubled = [tuple(v << l for v in x) for x in items for l in range(t.bit_length())]
        Xd = preprocess_items(doubled, t, d)
        assert fast_unbounded(multiset(items, d), t) == bellman(Xd, t)


def test_small_items_at_huge_target():
    g = 1 << 17
    big = (1 << 29) + 7
    t = 1 << 30
    got = set(as_ints(fast_unbounded(multiset([3 * g, 5 * g, big]), t, SolverConfig(k_const=1, small_exponent=2))))
    want = set()
    for c in range(t // big + 1):
        for a in range(t // (3 * g) + 1):
            for b in range((t - c * big - 3 * g * a) // (5 * g) + 1 if c * big + 3 * g * a <= t else 0):
                want.add(c * big + 3 * g * a + 5 * g * b)
    assert got == want
