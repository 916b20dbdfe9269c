"""Reference dynamic programs for the four streaming problems.

Everything here is deliberately slow-and-simple: these are the ground
truths the fast engines are checked against.  The online edit oracle
maintains one full column of the alignment grid per arrival; the
brute-force variant re-solves every suffix from scratch with a textbook
two-row DP and is only meant for tiny inputs.

Grid conventions used throughout the package: the grid has rows
j = -1..n-1 (row j consumes fixed-string symbol F[j] on its diagonal
edges) and columns i = -1,0,1,... (column i consumes stream symbol
S[i]).  A column is stored as an array of length n+1 where index k holds
row j = k-1, i.e. index 0 is the free top row and index n is the output
row.  Horizontal steps cost 1 except along row -1 where they are free,
vertical steps cost 1, diagonal steps cost 0 on a symbol match and 1
otherwise.  Infinite entries use the sentinel n+1; a genuine distance
never exceeds n because deleting all of F after matching nothing costs
exactly n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Codes, as_codes


def inf_value(n: int) -> int:
    """Sentinel used for unreachable/unstored column entries."""
    return n + 1


@dataclass
class DpColumn:
    """One column of the alignment grid; index k holds row j = k-1."""

    n: int
    index: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.shape != (self.n + 1,):
            raise ValueError("column must have n+1 entries")

    def value(self, j: int) -> int:
        return int(self.values[j + 1])

    def is_finite(self, j: int) -> bool:
        return self.value(j) <= self.n

    def finite_prefix_len(self) -> int:
        """Number of finite entries counted from the output row downward."""
        flipped = self.values[::-1]
        bad = np.nonzero(flipped > self.n)[0]
        fin = self.n + 1 if len(bad) == 0 else int(bad[0])
        if np.any(flipped[fin:] <= self.n):
            raise ValueError("finite entries must be contiguous from the top")
        return fin


def edge_weight(kind: str, j: int, i: int, F: Codes, S: Codes) -> int:
    """Weight of the edge leaving grid node (j, i) in direction `kind`."""
    if kind == "right":
        return 0 if j == -1 else 1
    if kind == "down":
        return 1
    if kind == "diag":
        F = as_codes(F)
        S = as_codes(S)
        return 0 if F[j + 1] == S[i + 1] else 1
    raise ValueError(f"unknown edge kind {kind!r}")


def _seed_column(n: int) -> np.ndarray:
    # Column -1: only vertical moves are possible, so row j costs j+1.
    return np.arange(n + 1, dtype=np.int64)


def _advance_column(prev: np.ndarray, F: np.ndarray, sym: int) -> np.ndarray:
    """Push one full column of the grid DP forward by one stream symbol."""
    n = len(F)
    cost = (F != sym).astype(np.int64)
    cand = np.empty(n + 1, dtype=np.int64)
    cand[0] = prev[0]  # row -1 moves right for free
    cand[1:] = np.minimum(prev[1:] + 1, prev[:-1] + cost)
    # Fold in vertical edges: new[k] = min(cand[k], new[k-1] + 1), which is
    # a running minimum of cand[k] - k shifted back.
    ar = np.arange(n + 1, dtype=np.int64)
    return np.minimum.accumulate(cand - ar) + ar


class OnlineEditOracle:
    """Column-at-a-time reference for the suffix-minimising edit output.

    After feeding symbols S[0..i], ``last_output`` equals
    min over h of Edit(F, S[h..i]) including the empty suffix.
    """

    def __init__(self, F: Codes):
        self.F = as_codes(F)
        self.n = len(self.F)
        self.column = _seed_column(self.n)
        self.i = -1

    def step(self, symbol: int) -> int:
        self.column = _advance_column(self.column, self.F, int(symbol))
        self.i += 1
        assert self.column[0] == 0
        assert np.all(np.abs(np.diff(self.column)) <= 1)
        return int(self.column[self.n])

    def run(self, S: Codes) -> np.ndarray:
        return np.asarray([self.step(s) for s in as_codes(S)],
                          dtype=np.int64)

    def snapshot(self) -> DpColumn:
        return DpColumn(self.n, self.i, self.column.copy())


def online_edit_naive(F: Codes, S: Codes) -> np.ndarray:
    """Outputs of the online oracle for every arrival of S."""
    return OnlineEditOracle(F).run(S)


def _edit_distance(a, b) -> int:
    # Textbook two-row Wagner-Fischer, kept independent of the column DP.
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def brute_force_min_edit(F: Codes, S_prefix: Codes) -> int:
    """min over h of Edit(F, S_prefix[h..]) by solving every suffix."""
    F = as_codes(F).tolist()
    S = as_codes(S_prefix).tolist()
    if len(S) > 512:
        raise ValueError("brute force capped at streams of length 512")
    return min(_edit_distance(F, S[h:]) for h in range(len(S) + 1))


def window_view(S: Codes, t: int, n: int) -> np.ndarray:
    """The length-n window of a 3n stream aligned with arrival t."""
    S = as_codes(S)
    if len(S) < 2 * n + t + 1:
        raise ValueError("stream too short for this arrival")
    if not 0 <= t < n:
        raise ValueError("arrival out of range")
    return S[n + 1 + t: 2 * n + t + 1]


def hamming(F: Codes, window: Codes) -> int:
    F = as_codes(F)
    w = as_codes(window)
    if len(F) != len(w):
        raise ValueError("window length must match |F|")
    return int(np.count_nonzero(F != w))


def convolution(F: Codes, window: Codes, mod: int = 0) -> int:
    """Inner product of F and the window, optionally reduced mod `mod`."""
    F = as_codes(F)
    w = as_codes(window)
    if len(F) != len(w):
        raise ValueError("window length must match |F|")
    total = sum(int(a) * int(b) for a, b in zip(F.tolist(), w.tolist()))
    return total % mod if mod else total


def lcs(F: Codes, window: Codes) -> int:
    """Longest common subsequence length via the classic grid DP."""
    F = as_codes(F)
    w = as_codes(window)
    n = len(F)
    if len(w) != n:
        raise ValueError("window length must match |F|")
    if n > 1 << 14:
        raise ValueError("quadratic LCS capped at n = 2**14")
    prev = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        eq = (w == F[i]).astype(np.int64)
        cand = np.maximum(prev[1:], prev[:-1] + eq)
        cur = np.empty(n + 1, dtype=np.int64)
        cur[0] = 0
        # Row values are non-decreasing, so carrying the left neighbour is
        # a running maximum of the vertical/diagonal candidates.
        cur[1:] = np.maximum.accumulate(cand)
        prev = cur
    return int(prev[n])


def stream_outputs(problem: str, F: Codes, S: Codes, mod: int = 0) -> np.ndarray:
    """Reference outputs Y[0..n-1] for a window problem over a 3n stream.

    For the edit problem the output at t is the suffix-minimising
    distance after arrival index 2n+t of the raw stream.
    """
    F = as_codes(F)
    S = as_codes(S)
    n = len(F)
    if problem == "edit":
        full = online_edit_naive(F, S)
        return full[2 * n: 3 * n]
    fns = {"hamming": hamming,
           "lcs": lcs,
           "convolution": lambda f, w: convolution(f, w, mod)}
    if problem not in fns:
        raise ValueError(f"unknown problem {problem!r}")
    fn = fns[problem]
    return np.asarray([fn(F, window_view(S, t, n)) for t in range(n)],
                      dtype=np.int64)
