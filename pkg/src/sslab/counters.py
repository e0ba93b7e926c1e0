"""Work counters used as a machine-independent proxy for running time."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional


def debug_asserts() -> bool:
    return os.environ.get("SSLAB_DEBUG_ASSERTS", "") == "1"


@dataclass
class WorkCounters:
    sumset_elems: int = 0   # elements emitted by sumset computations
    pr_nodes: int = 0       # prefix-restricted recursion nodes
    hashes: int = 0         # hash functions evaluated in large-item combination
    pr_work: int = 0        # budgeted prefix-restricted work units
    base_work: int = 0      # copies * output size of every Bellman base case
    retries: int = 0
    max_depth: int = 0
    # when a list, completed prefix-restricted nodes append (na, nb, k, d, s, work, |C|)
    pr_trace: Optional[list] = field(default=None, repr=False, compare=False)

    def merge(self, other: "WorkCounters") -> None:
        self.sumset_elems += other.sumset_elems
        self.pr_nodes += other.pr_nodes
        self.hashes += other.hashes
        self.pr_work += other.pr_work
        self.base_work += other.base_work
        self.retries += other.retries
        self.max_depth = max(self.max_depth, other.max_depth)

    def total(self) -> int:
        return self.sumset_elems + self.pr_work + self.base_work

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("sumset_elems", "pr_nodes", "hashes", "pr_work", "base_work", "retries", "max_depth")}
