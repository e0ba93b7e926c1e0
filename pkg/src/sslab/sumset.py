"""Exact sumsets A + B of point sets.

Two engines are provided.  ``dense`` convolves indicator arrays over the
bounding box of the output with an FFT and is fully deterministic.
``output_sensitive`` hashes values modulo a random prime in [2s, 4s),
where s is a guess for the number of sums not yet recovered, and recovers every output value
from the first three moments of its residue class.  A class whose moments
satisfy S0 * S2 == S1**2 provably holds a single value (zero variance), so
recovered values are always correct; classes holding several values are
resolved in later rounds after subtracting what is already known.

Multi-dimensional inputs go through the base-(2t+1) encoding for the
output-sensitive engine; the dense engine convolves in d dimensions directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import gmpy2
import numpy as np
from scipy.signal import fftconvolve

from .core import PointSet, canon
from .counters import WorkCounters

ENGINES = ("dense", "output_sensitive", "auto")
DEFAULT_WIDTH_BITS = 63
DENSE_AUTO_LIMIT = 1 << 20
DENSE_HARD_LIMIT = 1 << 26
MAX_ROUNDS = 200


class EncodingOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class SumsetEngineConfig:
    engine: str = "auto"
    seed: int = 0
    verify: bool = False
    width_bits: int = DEFAULT_WIDTH_BITS
    dense_limit: int = DENSE_HARD_LIMIT

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")


# -- encoding ---------------------------------------------------------------

def _check_width(t: int, d: int, width_bits: int) -> int:
    base = 2 * t + 1
    if base ** d >= (1 << width_bits):
        raise EncodingOverflowError(
            f"(2t+1)^d = {base}^{d} does not fit in {width_bits} bits; "
            "fall back to direct d-dimensional merging")
    return base


def encode_array(arr: np.ndarray, t: int, width_bits: int = DEFAULT_WIDTH_BITS) -> np.ndarray:
    d = arr.shape[1]
    base = _check_width(t, d, width_bits)
    weights = np.array([base ** i for i in range(d)], dtype=np.int64)
    return arr @ weights


def decode_array(vals: np.ndarray, t: int, d: int) -> np.ndarray:
    base = 2 * t + 1
    out = np.empty((vals.shape[0], d), dtype=np.int64)
    rest = vals.astype(np.int64, copy=True)
    for i in range(d):
        out[:, i] = rest % base
        rest //= base
    if rest.size and rest.max() != 0:
        raise ValueError("value out of range for decoding")
    return out


def encode_points(A: PointSet, t: int, width_bits: int = DEFAULT_WIDTH_BITS) -> PointSet:
    """phi(x) = sum_i x[i] * (2t+1)^i, as a one-dimensional set."""
    arr = A.array
    if arr.size and arr.max() > t:
        raise ValueError("coordinate exceeds t")
    return PointSet.from_array(canon(encode_array(arr, t, width_bits), 1))


def decode_points(E: PointSet, t: int, d: int) -> PointSet:
    if E.dim != 1:
        raise ValueError("encoded sets are one-dimensional")
    return PointSet.from_array(canon(decode_array(E.array[:, 0], t, d), d))


# -- dense engine -------------------------------------------------------------

def _dense(a: np.ndarray, b: np.ndarray, limit: int) -> np.ndarray:
    ext_a = a.max(axis=0) + 1
    ext_b = b.max(axis=0) + 1
    shape = tuple(int(v) for v in ext_a + ext_b - 1)
    if math.prod(shape) > limit:
        raise ValueError(f"dense sumset range {shape} exceeds limit {limit}")
    fa = np.zeros(tuple(int(v) for v in ext_a))
    fb = np.zeros(tuple(int(v) for v in ext_b))
    fa[tuple(a.T)] = 1.0
    fb[tuple(b.T)] = 1.0
    return np.argwhere(fftconvolve(fa, fb) > 0.5).astype(np.int64)


# -- output-sensitive engine ----------------------------------------------------

def random_prime(lo: int, rng: np.random.Generator) -> int:
    """A prime in [lo, 2lo) chosen from a random starting point."""
    start = int(rng.integers(lo, 2 * lo))
    p = int(gmpy2.next_prime(start - 1))
    if p >= 2 * lo:
        p = int(gmpy2.next_prime(lo - 1))
    return p


def _moments(vals: np.ndarray, p: int) -> dict[int, tuple[int, int, int]]:
    """Per residue class r = v mod p: (count, sum q, sum q^2) with q = v // p."""
    res = (vals % p).tolist()
    quo = (vals // p).tolist()
    out: dict[int, list[int]] = {}
    for r, q in zip(res, quo):
        m = out.get(r)
        if m is None:
            out[r] = [1, q, q * q]
        else:
            m[0] += 1
            m[1] += q
            m[2] += q * q
    return out


def _pack(moments: dict, p: int, sw: int, width: int) -> gmpy2.mpz:
    buf = bytearray(p * width)
    for r, (c0, c1, c2) in moments.items():
        v = (2 * c0) | ((2 * c1) << sw) | (c2 << (2 * sw))
        buf[r * width:(r + 1) * width] = v.to_bytes(width, "little")
    return gmpy2.mpz(int.from_bytes(buf, "little"))


def _residue_moments(a: np.ndarray, b: np.ndarray, p: int) -> dict[int, list[int]]:
    """Moments of q over pairs, grouped by (a + b) mod p, via one big product.

    Each residue slot carries the truncated exponential generating function
    2 + 2q y + q^2 y^2 of its members; multiplying the packed polynomials
    gives 4*S0, 4*S1 and 2*S2 for every slot of the linear product.
    """
    ma, mb = _moments(a, p), _moments(b, p)
    qa = int(a.max()) // p
    qb = int(b.max()) // p
    bound = 12 * a.shape[0] * b.shape[0] * max(1, qa) ** 2 * max(1, qb) ** 2
    sw = bound.bit_length() + 1
    width = (5 * sw + 7) // 8
    prod = _pack(ma, p, sw, width) * _pack(mb, p, sw, width)
    raw = int(prod).to_bytes(2 * p * width, "little")
    rows = np.frombuffer(raw, dtype=np.uint8).reshape(2 * p, width)
    mask = (1 << sw) - 1
    out: dict[int, list[int]] = {}
    for e in np.flatnonzero(rows.any(axis=1)).tolist():
        v = int.from_bytes(raw[e * width:(e + 1) * width], "little")
        s0, s1, s2 = (v & mask) // 4, ((v >> sw) & mask) // 4, ((v >> (2 * sw)) & mask) // 2
        if e >= p:
            # wrapping around adds one to q for every pair in the slot
            s2, s1 = s2 + 2 * s1 + s0, s1 + s0
        m = out.setdefault(e % p, [0, 0, 0])
        m[0] += s0
        m[1] += s1
        m[2] += s2
    return out


def _sparse_values(a: np.ndarray, b: np.ndarray, rng: np.random.Generator,
                   verify: bool) -> np.ndarray:
    """Sorted distinct values of a + b for 1-d nonnegative int arrays."""
    n_pairs = a.shape[0] * b.shape[0]
    max_sum = int(a.max()) + int(b.max())
    known: dict[int, int] = {}
    s = max(2, a.shape[0] + b.shape[0] - 1)
    for _ in range(MAX_ROUNDS):
        p = max_sum + 1 if 2 * s > max_sum else random_prime(2 * s, rng)
        mom = _residue_moments(a, b, p)
        for c, w in known.items():
            m = mom[c % p]
            qc = c // p
            m[0] -= w
            m[1] -= w * qc
            m[2] -= w * qc * qc
        nonempty = unresolved = 0
        for r, (s0, s1, s2) in mom.items():
            if s0 == 0:
                assert s1 == 0 and s2 == 0
                continue
            nonempty += 1
            if s0 * s2 == s1 * s1:
                assert s1 % s0 == 0
                known[r + p * (s1 // s0)] = s0
            else:
                unresolved += 1
        if unresolved == 0:
            break
        if 4 * unresolved > nonempty:
            # overloaded table: estimate how many distinct sums were hashed
            occupied = min(nonempty, p - 1) / p
            s = max(2 * s, math.ceil(-p * math.log1p(-occupied)))
        else:
            # known sums are subtracted exactly, so only the rest needs room
            s = max(2, 2 * unresolved)
    else:
        raise RuntimeError("output-sensitive sumset did not converge")
    if verify:
        if sum(known.values()) != n_pairs:
            raise RuntimeError("sumset pair count mismatch")
        bset = set(b.tolist())
        alist = a.tolist()
        sample = list(known)
        if len(sample) > 32:
            sample = rng.choice(np.array(sample, dtype=object), size=32, replace=False).tolist()
        for c in sample:
            if not any((c - x) in bset for x in alist):
                raise RuntimeError(f"no witness for sum {c}")
    return np.array(sorted(known), dtype=np.int64)


def _output_sensitive(a: np.ndarray, b: np.ndarray, cfg: SumsetEngineConfig) -> np.ndarray:
    d = a.shape[1]
    rng = np.random.default_rng(cfg.seed)
    if d == 1:
        return _sparse_values(a[:, 0], b[:, 0], rng, cfg.verify).reshape(-1, 1)
    t = int(max(a.max(), b.max()))
    ea = np.unique(encode_array(a, t, cfg.width_bits))
    eb = np.unique(encode_array(b, t, cfg.width_bits))
    vals = _sparse_values(ea, eb, rng, cfg.verify)
    return canon(decode_array(vals, t, d), d)


# -- public entry points ----------------------------------------------------------

def sumset_arrays(a: np.ndarray, b: np.ndarray, cfg: Optional[SumsetEngineConfig] = None,
                  counters: Optional[WorkCounters] = None) -> np.ndarray:
    """Canonical array of {x + y}; inputs must be canonical ``(m, d)`` arrays."""
    cfg = cfg or SumsetEngineConfig()
    if a.shape[1] != b.shape[1]:
        raise ValueError("dimension mismatch")
    d = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    lo_a, lo_b = a.min(axis=0), b.min(axis=0)
    a0, b0 = a - lo_a, b - lo_b
    engine = cfg.engine
    if engine == "auto":
        volume = math.prod(int(v) for v in a0.max(axis=0) + b0.max(axis=0) + 1)
        engine = "dense" if volume <= DENSE_AUTO_LIMIT else "output_sensitive"
    if engine == "dense":
        out = _dense(a0, b0, cfg.dense_limit)
    else:
        out = _output_sensitive(a0, b0, cfg)
    out += lo_a + lo_b
    if counters is not None:
        counters.sumset_elems += out.shape[0]
    return out


def sumset(A: PointSet, B: PointSet, cfg: Optional[SumsetEngineConfig] = None,
           counters: Optional[WorkCounters] = None) -> PointSet:
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    return PointSet.from_array(sumset_arrays(A.array, B.array, cfg, counters))


def direct_sumset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise sums, deduplicated.  Cost |a| * |b|."""
    d = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    return canon((a[:, None, :] + b[None, :, :]).reshape(-1, d), d)
