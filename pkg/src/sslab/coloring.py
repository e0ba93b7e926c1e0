"""Color coding: a deterministic perfect hash family for large items and a
uniformly random partition for small items."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
import numpy as np

from .core import ItemMultiset, PointSet, canon
from .counters import WorkCounters
from .prefix import PrefixConfig, prefix_restricted_arrays


@dataclass(frozen=True)
class RSHashFamily:
    """h_i(x) = P_x(i) over F_p, where P_x has the base-p digits of x's index
    as coefficients.  Indices are positions in the canonical copy order."""
    p: int
    D: int
    m: int
    n_items: int

    def coefficients(self, index: int) -> list[int]:
        digits = []
        for _ in range(self.D + 1):
            index, r = divmod(index, self.p)
            digits.append(r)
        return digits

    def hash(self, i: int, index: int) -> int:
        acc = 0
        for c in reversed(self.coefficients(index)):
            acc = (acc * i + c) % self.p
        return acc

    def coefficient_matrix(self) -> np.ndarray:
        return np.array([self.coefficients(x) for x in range(self.n_items)],
                        dtype=np.int64).reshape(self.n_items, self.D + 1)

    def row(self, i: int, coeffs: Optional[np.ndarray] = None) -> np.ndarray:
        """h_i evaluated on every item index."""
        if coeffs is None:
            coeffs = self.coefficient_matrix()
        acc = np.zeros(self.n_items, dtype=np.int64)
        for j in range(self.D, -1, -1):
            acc = (acc * i + coeffs[:, j]) % self.p
        return acc

    def table(self) -> np.ndarray:
        coeffs = self.coefficient_matrix()
        return np.stack([self.row(i, coeffs) for i in range(self.p)])


def _ceil_log2(n: int) -> int:
    return max(1, (n - 1).bit_length())


def build_rs_family(n_items: int, m: int) -> RSHashFamily:
    if n_items < 1 or m < 1:
        raise ValueError("need n_items >= 1 and m >= 1")
    lo = m * m * _ceil_log2(n_items)
    p = int(gmpy2.next_prime(lo - 1)) if lo > 2 else 2
    assert p <= 2 * lo
    D = 0
    while p ** D < n_items:
        D += 1
    fam = RSHashFamily(p=p, D=D, m=m, n_items=n_items)
    assert math.comb(m, 2) * D < p
    return fam


def _large_coordinate_bound(copies: np.ndarray, t: int, gamma: Fraction) -> int:
    """Upper bound on how many large copies fit in one sum inside the box.

    Each copy is charged to one coordinate where it exceeds gamma*t; copies
    charged to coordinate j are each at least mu_j there, so at most
    floor(t / mu_j) of them fit.
    """
    big = copies * gamma.denominator > gamma.numerator * t
    charged = np.argmax(big, axis=1)
    total = 0
    for j in np.unique(charged).tolist():
        mu = int(copies[charged == j, j].min())
        total += t // mu
    return total


def combine_arrays(z: np.ndarray, XL: ItemMultiset, t: int, gamma: Fraction,
                   cfg: Optional[PrefixConfig] = None,
                   counters: Optional[WorkCounters] = None,
                   early_exit: bool = True,
                   shuffle_seed: Optional[int] = None) -> np.ndarray:
    d = XL.dim
    counters = counters if counters is not None else WorkCounters()
    gamma = Fraction(gamma)
    copies = XL.copies()
    if copies.shape[0] == 0:
        return z
    big = copies * gamma.denominator > gamma.numerator * t
    if not big.any(axis=1).all():
        raise ValueError("combine_large_items: item with no coordinate above gamma*t")
    n = copies.shape[0]
    m = min(math.ceil(d / gamma), n, _large_coordinate_bound(copies, t, gamma))
    m = max(1, m)
    fam = build_rs_family(n, m)
    coeffs = fam.coefficient_matrix()
    zero = np.zeros((1, d), dtype=np.int64)
    seen = set()
    results = []
    order = range(fam.p)
    if shuffle_seed is not None:
        order = np.random.default_rng(shuffle_seed).permutation(fam.p).tolist()
    for i in order:
        row = fam.row(i, coeffs)
        # relabel buckets by first occurrence so equal partitions are skipped
        _, first, inverse = np.unique(row, return_index=True, return_inverse=True)
        key = tuple(np.argsort(np.argsort(first))[inverse].tolist())
        if key in seen:
            continue
        seen.add(key)
        counters.hashes += 1
        zh = z
        for bucket in np.unique(row).tolist():
            members = canon(np.vstack([zero, copies[row == bucket]]), d)
            zh = prefix_restricted_arrays(zh, members, t, d, cfg, counters)
        if early_exit and len(np.unique(row)) == n:
            # injective on every copy: Z'_h is already the whole answer
            return zh
        results.append(zh)
    return canon(np.vstack(results), d)


def combine_large_items(Z: PointSet, XL: ItemMultiset, t: int, gamma,
                        cfg: Optional[PrefixConfig] = None,
                        counters: Optional[WorkCounters] = None) -> PointSet:
    """(Z + S(XL, t)) ∩ [0..t]^d using the Reed-Solomon family."""
    if Z.dim != XL.dim:
        raise ValueError("dimension mismatch")
    if len(Z) and Z.array.max() > t:
        raise ValueError("Z must lie inside [0..t]^d")
    return PointSet.from_array(combine_arrays(Z.array, XL, t, Fraction(gamma), cfg, counters))


def random_partition(XS: ItemMultiset, K: int, seed) -> list[ItemMultiset]:
    """Assign every item copy to one of K parts uniformly and independently."""
    if K < 1:
        raise ValueError("K must be >= 1")
    rng = np.random.default_rng(seed)
    copies = [tuple(r) for r in XS.copies().tolist()]
    labels = rng.integers(0, K, size=len(copies)).tolist()
    parts: list[list] = [[] for _ in range(K)]
    for c, lab in zip(copies, labels):
        parts[lab].append(c)
    return [ItemMultiset.from_points(p, XS.dim) for p in parts]
