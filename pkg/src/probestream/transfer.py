"""Interval-tree accounting of cross-half memory traffic.

A balanced binary tree is laid over arrivals 0..n-1.  An internal node v
covers arrivals [t0, t2] and splits them at t1; its transfer count I_v
is the number of distinct cells written during [t0, t1] and then read
during [t1+1, t2] before any overwrite inside the right half.  Each read
is attributed to at most one node (the one whose halves straddle the
read and its sourcing write), so the I_v sums are a lower bound on total
reads.  R_v simply counts read probes in the right half.

Arrivals outside [0, n) — warm-up traffic tagged with negative or large
clocks — belong to no node and are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .memory import KIND_READ, KIND_WRITE, AccessLog


@dataclass(frozen=True)
class TreeNode:
    depth: int
    t0: int
    t2: int

    @property
    def ell(self) -> int:
        return self.t2 - self.t0 + 1

    @property
    def t1(self) -> Optional[int]:
        if self.ell < 2:
            return None
        return self.t0 + self.ell // 2 - 1


@dataclass
class TransferTree:
    n: int
    nodes: List[TreeNode]

    def internal(self) -> List[TreeNode]:
        return [v for v in self.nodes if v.ell >= 2]

    def by_depth(self) -> Dict[int, List[TreeNode]]:
        out: Dict[int, List[TreeNode]] = {}
        for v in self.internal():
            out.setdefault(v.depth, []).append(v)
        return out


def build_tree(n: int) -> TransferTree:
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of two, at least 2")
    nodes = []

    def rec(depth, t0, t2):
        nodes.append(TreeNode(depth, t0, t2))
        if t2 > t0:
            mid = t0 + (t2 - t0 + 1) // 2 - 1
            rec(depth + 1, t0, mid)
            rec(depth + 1, mid + 1, t2)

    rec(0, 0, n - 1)
    return TransferTree(n, nodes)


def _source_writes(log: AccessLog) -> List[Optional[int]]:
    """For each log entry, the arrival of the latest earlier write to
    that cell (None for writes and for reads of never-written cells)."""
    last_write: Dict[int, int] = {}
    out: List[Optional[int]] = []
    for t, cell, kind in log:
        if kind == KIND_WRITE:
            out.append(None)
            last_write[cell] = t
        else:
            out.append(last_write.get(cell))
    return out


def compute_Iv(log: AccessLog, node: TreeNode) -> int:
    """Transfer count of one node, from its definition.

    A cell counts if its first read in the right half is sourced by a
    write from the left half.
    """
    if node.t1 is None:
        return 0
    sources = _source_writes(log)
    seen = set()
    count = 0
    for (t, cell, kind), src in zip(log, sources):
        if kind != KIND_READ or not node.t1 + 1 <= t <= node.t2:
            continue
        if cell in seen:
            continue
        seen.add(cell)
        if src is not None and node.t0 <= src <= node.t1:
            count += 1
    return count


def compute_Iv_bruteforce(log: AccessLog, node: TreeNode) -> int:
    """Same quantity, evaluated cell by cell straight off the raw log."""
    if node.t1 is None:
        return 0
    cells = {cell for _, cell, _ in log}
    count = 0
    for c in cells:
        events = [(t, kind) for t, cc, kind in log if cc == c]
        written_left = any(kind == KIND_WRITE and node.t0 <= t <= node.t1
                           for t, kind in events)
        if not written_left:
            continue
        # walk the right half in log order: a read before any overwrite?
        ok = False
        for t, kind in events:
            if not node.t1 + 1 <= t <= node.t2:
                continue
            if kind == KIND_WRITE:
                break
            ok = True
            break
        if ok:
            count += 1
    return count


def compute_Rv(log: AccessLog, node: TreeNode) -> int:
    if node.t1 is None:
        return 0
    return sum(1 for t, _, kind in log
               if kind == KIND_READ and node.t1 + 1 <= t <= node.t2)


def transfer_report(log: AccessLog, n: int) -> dict:
    """Per-depth I_v and R_v sums plus the global read-probe bound."""
    tree = build_tree(n)
    sources = _source_writes(log)
    total_reads = sum(1 for t, _, kind in log
                      if kind == KIND_READ and 0 <= t < n)
    depth_rows = []
    iv_total = 0
    for depth, nodes in sorted(tree.by_depth().items()):
        iv_sum = 0
        rv_sum = 0
        for v in nodes:
            seen = set()
            for (t, cell, kind), src in zip(log, sources):
                if kind != KIND_READ or not v.t1 + 1 <= t <= v.t2:
                    continue
                rv_sum += 1
                if cell in seen:
                    continue
                seen.add(cell)
                if src is not None and v.t0 <= src <= v.t1:
                    iv_sum += 1
        iv_total += iv_sum
        depth_rows.append({"depth": depth, "ell": nodes[0].ell,
                           "nodes": len(nodes), "iv_sum": iv_sum,
                           "rv_sum": rv_sum})
    if iv_total > total_reads:
        raise AssertionError("transfer sums exceeded total reads")
    return {"n": n, "total_reads": total_reads, "iv_total": iv_total,
            "depths": depth_rows}
