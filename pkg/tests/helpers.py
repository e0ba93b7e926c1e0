"""Brute-force references kept deliberately separate from the package code."""
from __future__ import annotations

import itertools

import numpy as np

from sslab import ItemMultiset


def brute_subset_sums(items, t, d=1):
    """Enumerate every subset with itertools; only for tiny inputs."""
    pts = [tuple(p) if isinstance(p, (tuple, list)) else (p,) for p in items]
    out = set()
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            s = tuple(sum(c[j] for c in combo) for j in range(d))
            if all(v <= t for v in s):
                out.add(s)
    return sorted(out)


def brute_box_sumset(A, B, t, k):
    out = set()
    for a in A:
        for b in B:
            c = tuple(x + y for x, y in zip(a, b))
            if all(v <= t for v in c[:k]):
                out.add(c)
    return sorted(out)


def random_items(rng: np.random.Generator, n: int, t: int, d: int, lo: int = 0):
    return [tuple(int(v) for v in rng.integers(lo, t + 1, size=d)) for _ in range(n)]


def multiset(items, d=1) -> ItemMultiset:
    return ItemMultiset.from_points([p if isinstance(p, tuple) else (p,) for p in items], d)


def as_ints(S):
    return [p[0] for p in S]
