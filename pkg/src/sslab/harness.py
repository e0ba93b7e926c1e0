"""Instance files, generators, oracle verification, benchmarks and the
sub-multiplicativity checker."""
from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .core import NAIVE_MAX_ITEMS, ItemMultiset, PointSet, bellman, naive_oracle, unbounded_oracle
from .counters import WorkCounters
from .solver import SolverConfig, solve
from .sumset import SumsetEngineConfig, sumset_arrays
from .unbounded import fast_unbounded

log = logging.getLogger(__name__)

MODES = ("bounded", "unbounded")
ALGOS = ("bellman", "fast", "unbounded")
KINDS = ("uniform", "dense", "sparse-structured", "footnote2")
CSV_FIELDS = ["id", "n", "t", "d", "setsize", "algo", "seed", "wall_ms",
              "sumset_elems", "pr_nodes", "hashes"]
INSTANCE_SUFFIX = ".inst"


class InstanceError(ValueError):
    pass


class AlgoModeError(ValueError):
    pass


@dataclass
class Instance:
    d: int
    t: int
    mode: str
    items: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.items)

    def multiset(self) -> ItemMultiset:
        return ItemMultiset.from_points(self.items, self.d)


def _ints(line: str, lineno: int) -> list[int]:
    try:
        vals = [int(tok) for tok in line.split()]
    except ValueError:
        raise InstanceError(f"line {lineno}: expected integers, got {line!r}") from None
    return vals


def parse_instance(text: str) -> Instance:
    """Parse the plain-text format; items with a coordinate above t are dropped."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InstanceError("empty instance file")
    head = lines[0].split()
    if len(head) != 4:
        raise InstanceError("header must be 'd t n mode'")
    d, t, n = _ints(" ".join(head[:3]), 1)
    mode = head[3]
    if mode not in MODES:
        raise InstanceError(f"unknown mode {mode!r}")
    if d < 1 or t < 0 or n < 0:
        raise InstanceError("need d >= 1, t >= 0, n >= 0")
    body = lines[1:]
    if len(body) != n:
        raise InstanceError(f"header says {n} items, found {len(body)} lines")
    items = []
    dropped = 0
    for k, line in enumerate(body, start=2):
        vals = _ints(line, k)
        if len(vals) != d:
            raise InstanceError(f"line {k}: expected {d} coordinates")
        if min(vals) < 0:
            raise InstanceError(f"line {k}: negative coordinate")
        if max(vals) > t:
            dropped += 1
            continue
        items.append(tuple(vals))
    if dropped:
        log.warning("dropped %d item(s) with a coordinate above t=%d", dropped, t)
    return Instance(d, t, mode, items)


def format_instance(inst: Instance) -> str:
    out = [f"{inst.d} {inst.t} {inst.n} {inst.mode}"]
    out += [" ".join(str(v) for v in item) for item in inst.items]
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(path, inst: Instance) -> None:
    Path(path).write_bytes(format_instance(inst).encode("ascii"))


def format_points(S: PointSet) -> str:
    return "".join(" ".join(str(v) for v in p) + "\n" for p in S)


# -- generators -------------------------------------------------------------------

def gen_instances(kind: str, n: int, t: int, d: int = 1, seed: int = 0,
                  mode: str = "bounded") -> dict[str, Instance]:
    """Generated instances keyed by a name suffix ('' for single-file kinds)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1 or t < 1 or d < 1:
        raise ValueError("n, t and d must be positive")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        arr = rng.integers(1, t + 1, size=(n, d))
    elif kind == "dense":
        arr = rng.integers(1, -(-t // n) + 1, size=(n, d))
    elif kind == "sparse-structured":
        pool = np.array(sorted({t >> i for i in range(1, t.bit_length())} - {0}) or [1])
        arr = pool[rng.integers(0, len(pool), size=(n, d))]
    else:
        half = t // 2
        a = [(half + i,) * d for i in range(1, n + 1)]
        b = [(half + n * j,) * d for j in range(1, n + 1)]
        return {"_A": Instance(d, t, mode, a), "_B": Instance(d, t, mode, b)}
    return {"": Instance(d, t, mode, [tuple(int(v) for v in row) for row in arr])}


# -- running ------------------------------------------------------------------

def run_algo(inst: Instance, algo: str, cfg: Optional[SolverConfig] = None,
             counters: Optional[WorkCounters] = None) -> PointSet:
    """bounded mode: bellman | fast; unbounded mode: bellman (the table oracle) | unbounded."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    X = inst.multiset()
    if inst.mode == "bounded":
        if algo == "unbounded":
            raise AlgoModeError("--algo unbounded needs an unbounded-mode instance")
        return bellman(X, inst.t) if algo == "bellman" else solve(X, inst.t, cfg, counters)
    if algo == "fast":
        raise AlgoModeError("--algo fast needs a bounded-mode instance")
    return unbounded_oracle(X, inst.t) if algo == "bellman" else fast_unbounded(X, inst.t, cfg, counters)


@dataclass
class VerifyReport:
    runs: int = 0
    mismatches: int = 0
    naive_used: bool = False
    failed_seeds: list[int] = field(default_factory=list)

    def lines(self) -> list[str]:
        if self.runs == 0:
            return []
        oracles = "bellman+naive" if self.naive_used else "bellman"
        return [f"runs={self.runs} mismatches={self.mismatches} oracles={oracles}"] + \
               [f"mismatch seed={s}" for s in self.failed_seeds]


def verify_instance(inst: Instance, seeds: int, cfg: Optional[SolverConfig] = None,
                    base_seed: int = 0) -> VerifyReport:
    cfg = cfg or SolverConfig()
    report = VerifyReport()
    if seeds <= 0:
        return report
    X = inst.multiset()
    if inst.mode == "bounded":
        truth = bellman(X, inst.t)
        report.naive_used = X.n <= NAIVE_MAX_ITEMS
        if report.naive_used and naive_oracle(X, inst.t) != truth:
            raise AssertionError("bellman and naive oracle disagree")
    else:
        truth = unbounded_oracle(X, inst.t)
    for k in range(seeds):
        seed = base_seed + k
        run_cfg = replace(cfg, seed=seed)
        algo = "fast" if inst.mode == "bounded" else "unbounded"
        got = run_algo(inst, algo, run_cfg)
        report.runs += 1
        if got != truth:
            report.mismatches += 1
            report.failed_seeds.append(seed)
    return report


# -- sub-multiplicativity -------------------------------------------------------------

@dataclass
class SubmultReport:
    sum_size: int
    b_sizes: list[int]
    lhs: int        # |A_1 + ... + A_K|^(K-1)
    rhs: int        # product of |B_i|

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def check_submultiplicativity(sets: list[PointSet],
                              cfg: Optional[SumsetEngineConfig] = None) -> SubmultReport:
    """Compare |A_1+...+A_K|^(K-1) with prod_i |B_i|, B_i the sumset without A_i."""
    K = len(sets)
    if K < 2:
        raise ValueError("need at least two sets")
    if any(len(S) == 0 for S in sets):
        raise ValueError("sets must be nonempty")
    cfg = cfg or SumsetEngineConfig()
    arrs = [S.array for S in sets]
    d = arrs[0].shape[1]
    zero = np.zeros((1, d), dtype=np.int64)
    # prefix[i] = A_1 + ... + A_i, suffix[i] = A_{i+1} + ... + A_K
    prefix, suffix = [zero], [zero]
    for a in arrs:
        prefix.append(sumset_arrays(prefix[-1], a, cfg))
    for a in reversed(arrs):
        suffix.append(sumset_arrays(suffix[-1], a, cfg))
    suffix.reverse()
    total = prefix[-1].shape[0]
    b_sizes = [sumset_arrays(prefix[i], suffix[i + 1], cfg).shape[0] for i in range(K)]
    return SubmultReport(total, b_sizes, total ** (K - 1), math.prod(b_sizes))


# -- benchmarking ----------------------------------------------------------------------

@dataclass
class BenchRecord:
    id: str
    n: int
    t: int
    d: int
    setsize: int
    algo: str
    seed: int
    wall_ms: float
    sumset_elems: int
    pr_nodes: int
    hashes: int

    def row(self) -> list:
        return [getattr(self, f) for f in CSV_FIELDS]


def list_instances(directory) -> list[Path]:
    path = Path(directory)
    if not path.is_dir():
        raise FileNotFoundError(f"not a readable directory: {directory}")
    return sorted(p for p in path.iterdir() if p.suffix == INSTANCE_SUFFIX and p.is_file())


def bench(directory, algos: Iterable[str], cfg: Optional[SolverConfig] = None) -> list[BenchRecord]:
    cfg = cfg or SolverConfig()
    records = []
    for path in list_instances(directory):
        inst = read_instance(path)
        for algo in algos:
            counters = WorkCounters()
            start = time.perf_counter()
            try:
                S = run_algo(inst, algo, cfg, counters)
            except AlgoModeError as exc:
                log.warning("%s: skipped (%s)", path.name, exc)
                continue
            ms = (time.perf_counter() - start) * 1000.0
            records.append(BenchRecord(path.stem, inst.n, inst.t, inst.d, len(S), algo, cfg.seed,
                                       round(ms, 3), counters.sumset_elems, counters.pr_nodes,
                                       counters.hashes))
    records.sort(key=lambda r: (r.id, r.algo))
    return records


def format_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()
