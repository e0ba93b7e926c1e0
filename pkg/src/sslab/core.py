"""Domain types, item preprocessing, Bellman's DP and exhaustive oracles.

Point sets are kept as ``(m, d)`` int64 arrays in lexicographic order.  The
``PointSet`` wrapper is what crosses module boundaries; internal routines work
on the raw arrays to avoid converting back and forth.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

NAIVE_MAX_ITEMS = 24
UNBOUNDED_TABLE_BUDGET = 1 << 24


def canon(arr: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Deduplicate rows and sort them lexicographically."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1 if dim is None else dim)
    if dim is None:
        dim = arr.shape[1]
    if arr.shape[0] == 0:
        return np.zeros((0, dim), dtype=np.int64)
    if dim == 1:
        return np.unique(arr[:, 0]).reshape(-1, 1)
    return np.unique(arr, axis=0)


def in_box(arr: np.ndarray, t: int, capped: int | None = None) -> np.ndarray:
    """Row mask for points whose first ``capped`` coordinates are <= t."""
    k = arr.shape[1] if capped is None else capped
    if k == 0:
        return np.ones(arr.shape[0], dtype=bool)
    return np.all(arr[:, :k] <= t, axis=1)


class PointSet:
    """Immutable, deduplicated, lexicographically ordered set of points."""

    __slots__ = ("dim", "_pts")

    def __init__(self, points, dim: int | None = None, *, _trusted: bool = False):
        if _trusted:
            arr = points
        else:
            arr = np.asarray(points if isinstance(points, np.ndarray) else list(points),
                             dtype=np.int64)
            if dim is None:
                dim = 1 if arr.ndim <= 1 else arr.shape[1]
            arr = arr.reshape(-1, dim)
            if arr.size and arr.min() < 0:
                raise ValueError("point coordinates must be nonnegative")
            arr = canon(arr, dim)
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        arr.setflags(write=False)
        self.dim = dim
        self._pts = arr

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "PointSet":
        """Wrap an array that is already canonical (no copy, no checks)."""
        return cls(arr, arr.shape[1], _trusted=True)

    @classmethod
    def empty(cls, dim: int = 1) -> "PointSet":
        return cls(np.zeros((0, dim), dtype=np.int64), dim, _trusted=True)

    @classmethod
    def zero(cls, dim: int = 1) -> "PointSet":
        return cls(np.zeros((1, dim), dtype=np.int64), dim, _trusted=True)

    @property
    def array(self) -> np.ndarray:
        return self._pts

    def __len__(self) -> int:
        return self._pts.shape[0]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self._pts.tolist():
            yield tuple(row)

    def __contains__(self, point) -> bool:
        p = np.asarray(point, dtype=np.int64).reshape(-1)
        if p.shape[0] != self.dim or len(self) == 0:
            return False
        if self.dim == 1:
            col = self._pts[:, 0]
            i = np.searchsorted(col, p[0])
            return bool(i < col.shape[0] and col[i] == p[0])
        return bool(np.any(np.all(self._pts == p, axis=1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._pts, other._pts)

    __hash__ = None  # type: ignore[assignment]

    def to_list(self) -> list[tuple[int, ...]]:
        return list(self)

    def values(self) -> list[int]:
        """Plain integers of a one-dimensional set."""
        if self.dim != 1:
            raise ValueError("values() needs a one-dimensional set")
        return self._pts[:, 0].tolist()

    def __repr__(self) -> str:
        if len(self) > 12:
            return f"PointSet(dim={self.dim}, size={len(self)})"
        if self.dim == 1:
            return f"PointSet({self.values()})"
        return f"PointSet({self.to_list()}, dim={self.dim})"


@dataclass(frozen=True)
class ItemMultiset:
    dim: int
    items: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        prev = None
        for point, mult in self.items:
            if mult < 1:
                raise ValueError("multiplicity must be >= 1")
            if len(point) != self.dim:
                raise ValueError("item has wrong dimension")
            if prev is not None and not prev < point:
                raise ValueError("items must be strictly increasing")
            prev = point

    @classmethod
    def from_points(cls, points: Iterable, dim: int = 1) -> "ItemMultiset":
        """Build a multiset from raw points without any filtering."""
        counts = Counter(_as_tuple(p, dim) for p in points)
        return cls(dim, tuple(sorted(counts.items())))

    @property
    def n(self) -> int:
        return sum(m for _, m in self.items)

    def __len__(self) -> int:
        return self.n

    def copies(self) -> np.ndarray:
        """All item copies as an ``(n, d)`` array, in canonical order."""
        if not self.items:
            return np.zeros((0, self.dim), dtype=np.int64)
        pts = np.array([p for p, _ in self.items], dtype=np.int64).reshape(-1, self.dim)
        mults = np.array([m for _, m in self.items], dtype=np.int64)
        return np.repeat(pts, mults, axis=0)

    def distinct(self) -> np.ndarray:
        if not self.items:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array([p for p, _ in self.items], dtype=np.int64).reshape(-1, self.dim)

    def as_set(self) -> "ItemMultiset":
        return ItemMultiset(self.dim, tuple((p, 1) for p, _ in self.items))

    def split_half(self) -> tuple["ItemMultiset", "ItemMultiset"]:
        """Split the copies into a first half of size ceil(n/2) and the rest."""
        rows = [tuple(r) for r in self.copies().tolist()]
        h = (len(rows) + 1) // 2
        return (ItemMultiset.from_points(rows[:h], self.dim),
                ItemMultiset.from_points(rows[h:], self.dim))


@dataclass(frozen=True)
class Box:
    """Region [0..t]^capped x [0..inf)^(dim-capped)."""
    dim: int
    t: int
    capped: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if not 0 <= self.capped <= self.dim:
            raise ValueError("capped must lie in [0, dim]")

    @classmethod
    def full(cls, dim: int, t: int) -> "Box":
        return cls(dim, t, dim)

    def mask(self, arr: np.ndarray) -> np.ndarray:
        return in_box(arr, self.t, self.capped)


def _as_tuple(p, dim: int) -> tuple[int, ...]:
    if isinstance(p, (int, np.integer)):
        tup = (int(p),)
    else:
        tup = tuple(int(v) for v in p)
    if len(tup) != dim:
        raise ValueError(f"item {p!r} is not {dim}-dimensional")
    return tup


def multiplicity_cap(point: Sequence[int], t: int) -> int:
    return min(t // v for v in point if v > 0)


def preprocess_items(X, t: int, d: int) -> ItemMultiset:
    """Drop items outside the box and the zero vector, cap multiplicities.

    ``X`` may be a raw list of ints / tuples or an existing ``ItemMultiset``
    (useful when restricting to a smaller target).  A copy of ``x`` beyond
    ``min_j floor(t / x[j])`` can never appear in a sum inside the box.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if t < 0:
        raise ValueError("target must be nonnegative")
    if isinstance(X, ItemMultiset):
        if X.dim != d:
            raise ValueError("dimension mismatch")
        raw = Counter(dict(X.items))
    else:
        raw = Counter(_as_tuple(p, d) for p in X)
    kept = []
    for point, mult in raw.items():
        if any(v < 0 for v in point):
            raise ValueError(f"negative coordinate in item {point}")
        if any(v > t for v in point) or not any(point):
            continue
        kept.append((point, min(mult, multiplicity_cap(point, t))))
    kept.sort()
    return ItemMultiset(d, tuple(kept))


def bellman_arrays(copies: np.ndarray, t: int, dim: int) -> np.ndarray:
    S = np.zeros((1, dim), dtype=np.int64)
    if dim == 1:
        col = S[:, 0]
        for x in copies[:, 0].tolist():
            shifted = col + x
            col = np.union1d(col, shifted[shifted <= t])
        return col.reshape(-1, 1)
    for x in copies:
        shifted = S + x
        shifted = shifted[in_box(shifted, t)]
        if shifted.shape[0]:
            S = np.unique(np.vstack([S, shifted]), axis=0)
    return S


def bellman(X: ItemMultiset, t: int) -> PointSet:
    """S(X, t) by the classic add-one-item-at-a-time DP."""
    return PointSet.from_array(bellman_arrays(X.copies(), int(t), X.dim))


def naive_oracle(X: ItemMultiset, t: int) -> PointSet:
    """S(X, t) by enumerating all 2^n subsets (n <= 24)."""
    n = X.n
    if n > NAIVE_MAX_ITEMS:
        raise ValueError(f"naive oracle refuses n={n} > {NAIVE_MAX_ITEMS}")
    copies = X.copies()
    d = X.dim
    half = n // 2

    def all_sums(rows: np.ndarray) -> np.ndarray:
        m = rows.shape[0]
        if m == 0:
            return np.zeros((1, d), dtype=np.int64)
        masks = (np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1
        return masks.astype(np.int64) @ rows

    left, right = all_sums(copies[:half]), all_sums(copies[half:])
    found = []
    for row in left:
        sums = right + row
        found.append(sums[in_box(sums, t)])
    return PointSet.from_array(canon(np.vstack(found), d))


def unbounded_oracle(X: ItemMultiset, t: int, budget: int = UNBOUNDED_TABLE_BUDGET) -> PointSet:
    """S*(X, t) by reachability over the dense table [0..t]^d."""
    d = X.dim
    if (t + 1) ** d > budget:
        raise ValueError(f"dense table of {(t + 1) ** d} cells exceeds budget {budget}")
    reach = np.zeros((t + 1,) * d, dtype=bool)
    reach[(0,) * d] = True
    items = [tuple(p) for p, _ in X.items if all(v <= t for v in p) and any(p)]
    while True:
        nxt = reach.copy()
        for x in items:
            dst = tuple(slice(v, None) for v in x)
            src = tuple(slice(0, t + 1 - v) for v in x)
            nxt[dst] |= reach[src]
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return PointSet.from_array(np.argwhere(reach).astype(np.int64))
