"""Structured random instances with a decodable Hamming/LCS gap.

The fixed string alternates runs of a filler symbol p with marker slots
every pad+1 positions.  Most markers are f (a symbol the stream never
contains); one marker per power-of-two scale is h.  The stream has the
same run structure but its markers are fair coins over {h, t}.  At the
arrivals where the run structures line up:

* the Hamming distance is n_f plus the number of t-coins sitting under
  the h-markers, so any single such coin can be decoded from it;
* every long common subsequence picks at most one h per marker, which
  turns LCS into a small assignment problem over a "box matrix" of the
  coins near each h-marker;
* whenever the coin columns are balanced, taking exactly the aligned
  coins is optimal and LCS equals n minus the Hamming distance.

Selection lengths carry a pad/2 factor, so to stay in integers they are
handled doubled throughout and halved (with an evenness check) at the
end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import oracles

P, F_SYM, H, T = 0, 1, 2, 3
DELTA = 2


def pad_target(n: int) -> float:
    """Unrounded pad+1: 4*sqrt(log2(n) * log2(log2(n))) + 1."""
    l = math.log2(n)
    return 4.0 * math.sqrt(l * math.log2(l)) + 1.0


def pad_length(n: int) -> int:
    """pad such that pad+1 is the power of two nearest the target.

    Keeping pad+1 a power of two (ties round up) preserves divisibility
    into n, so marker slots tile both the fixed string and the stream.
    """
    if n < 64 or n & (n - 1):
        raise ValueError("n must be a power of two, at least 64")
    target = pad_target(n)
    lo = 1 << (int(math.floor(math.log2(target))))
    hi = lo * 2
    pp1 = lo if target - lo < hi - target else hi
    return min(pp1, n) - 1


@dataclass
class HardInstance:
    n: int
    pad: int
    F: np.ndarray
    h_positions: Tuple[int, ...]

    @property
    def n_h(self) -> int:
        return len(self.h_positions)

    @property
    def n_f(self) -> int:
        return self.n // (self.pad + 1) - self.n_h

    @property
    def n_p(self) -> int:
        return self.n - self.n // (self.pad + 1)


def build_fixed_string(n: int) -> HardInstance:
    """Marker slots every pad+1 positions; one h per power-of-two scale.

    For every power of two j in [sqrt(n), n] the marker slot closest to
    index n - j (ties toward the smaller index) becomes h.
    """
    pad = pad_length(n)
    step = pad + 1
    F = np.full(n, P, dtype=np.int64)
    F[pad::step] = F_SYM
    k = n.bit_length() - 1
    h_positions = []
    for e in range((k + 1) // 2, k + 1):
        target = n - (1 << e)
        lo = (target // step) * step + pad
        cands = [c for c in (lo - step, lo, lo + step) if 0 <= c < n]
        best = min(cands, key=lambda c: (abs(c - target), c))
        h_positions.append(best)
    h_positions = sorted(set(h_positions))
    if len(h_positions) != k - (k + 1) // 2 + 1:
        raise ValueError("power-of-two scales collided on a marker slot")
    gaps = np.diff(h_positions)
    if len(gaps) and gaps.min() < math.isqrt(n):
        raise ValueError("h markers ended up closer than sqrt(n)")
    F[h_positions] = H
    return HardInstance(n, pad, F, tuple(h_positions))


@dataclass
class HardStream:
    S: np.ndarray
    coins: np.ndarray  # 0 -> h, 1 -> t

    def coin_symbol(self, m: int) -> int:
        return H + int(self.coins[m])


def sample_stream(inst: HardInstance, seed) -> HardStream:
    """Length-3n stream with i.i.d. fair coins in the marker slots."""
    step = inst.pad + 1
    count = 3 * inst.n // step
    rng = np.random.default_rng(seed)
    coins = rng.integers(0, 2, count, dtype=np.int64)
    S = np.full(3 * inst.n, P, dtype=np.int64)
    S[inst.pad::step] = H + coins
    return HardStream(S, coins)


def well_aligned_arrivals(inst: HardInstance) -> List[int]:
    """Arrivals where the window's marker slots line up with F's."""
    return list(range(inst.pad, inst.n, inst.pad + 1))


def is_well_aligned(inst: HardInstance, stream: HardStream, t: int) -> bool:
    window = oracles.window_view(stream.S, t, inst.n)
    return bool(np.all((window == P) == (inst.F == P)))


def aligned_coin_indices(inst: HardInstance, t: int) -> List[int]:
    """Coin index sitting under each h marker of F at arrival t."""
    step = inst.pad + 1
    return [(inst.n + 1 + t + pos - inst.pad) // step
            for pos in inst.h_positions]


def hamming_from_coins(inst: HardInstance, stream: HardStream, t: int) -> int:
    """n_f plus the t-coins under the h markers; equals Hamming there."""
    idx = aligned_coin_indices(inst, t)
    return inst.n_f + int(stream.coins[idx].sum())


def recover_symbol(inst: HardInstance, stream: HardStream, hidden_coin: int,
                   ham_value: int, t: int) -> int:
    """Decode one hidden coin from the Hamming output at arrival t.

    All coins except `hidden_coin` may be consulted; the hidden one must
    sit under an h marker of F at this arrival.
    """
    idx = aligned_coin_indices(inst, t)
    if hidden_coin not in idx:
        raise ValueError("hidden coin is not under an h marker here")
    known_t = sum(int(stream.coins[m]) for m in idx if m != hidden_coin)
    residual = ham_value - inst.n_f - known_t
    if residual not in (0, 1):
        raise ValueError("Hamming value inconsistent with the known coins")
    return T if residual else H


# -- box matrices and selections ------------------------------------------

@dataclass
class BoxMatrix:
    """Per-h-marker windows of 2*pad+1 coins, centred on the aligned one.

    rows[r][c] for columns c = 0..2*pad holds the coin symbol (H or T) or
    None where the coin falls outside the current window.  Column pad is
    the aligned coin.  row_coins[r] is the centre's global coin index.
    """

    pad: int
    rows: Tuple[Tuple[Optional[int], ...], ...]
    row_coins: Tuple[int, ...]

    @property
    def width(self) -> int:
        return 2 * self.pad + 1

    @property
    def center(self) -> int:
        return self.pad


def build_matrix(inst: HardInstance, stream: HardStream, t: int) -> BoxMatrix:
    step = inst.pad + 1
    lo = inst.n + 1 + t          # first window position in the stream
    hi = 2 * inst.n + t          # last window position
    rows = []
    centers = aligned_coin_indices(inst, t)
    for m in centers:
        row = []
        for c in range(-inst.pad, inst.pad + 1):
            q = m + c
            pos = q * step + inst.pad
            if 0 <= q < len(stream.coins) and lo <= pos <= hi:
                row.append(H + int(stream.coins[q]))
            else:
                row.append(None)
        rows.append(tuple(row))
    return BoxMatrix(inst.pad, tuple(rows), tuple(centers))


def length_pi_doubled(cols: Sequence[int], n_p: int, pad: int) -> int:
    """Twice the completed-selection length for chosen h columns.

    cols lists the selected column (0..2*pad) per chosen row, in row
    order.  The empty selection scores n_p (doubled: 2*n_p).
    """
    base = 2 * n_p + 2 * len(cols)
    if not cols:
        return base
    center = pad
    travel = abs(center - cols[0]) + abs(center - cols[-1])
    travel += sum(abs(a - b) for a, b in zip(cols, cols[1:]))
    return base - pad * travel


def length_pi(cols: Sequence[int], n_p: int, pad: int) -> int:
    doubled = length_pi_doubled(cols, n_p, pad)
    if doubled % 2:
        raise ValueError("selection length is not an integer")
    return doubled // 2


def max_length_over_pi(matrix: BoxMatrix, n_p: int) -> int:
    """Best completed-selection length over all h selections.

    Row-by-row DP whose state is the column of the last chosen h (or
    nothing chosen yet); only h cells are selectable.
    """
    pad = matrix.pad
    center = matrix.center
    states = {}  # last column -> best doubled partial score
    for row in matrix.rows:
        nxt = dict(states)
        for c, sym in enumerate(row):
            if sym != H:
                continue
            cand = 2 - pad * abs(center - c)
            for c0, sc in states.items():
                cand = max(cand, sc + 2 - pad * abs(c0 - c))
            if cand > nxt.get(c, -1 << 60):
                nxt[c] = cand
        states = nxt
    best = 0  # empty selection
    for c0, sc in states.items():
        best = max(best, sc - pad * abs(center - c0))
    doubled = 2 * n_p + best
    if doubled % 2:
        raise ValueError("selection length is not an integer")
    return doubled // 2


def enumerate_selection_lengths(matrix: BoxMatrix, n_p: int) -> List[int]:
    """All selection lengths by explicit enumeration (tests only)."""
    pad = matrix.pad
    options = []
    for row in matrix.rows:
        opts = [None] + [c for c, sym in enumerate(row) if sym == H]
        options.append(opts)
    results = []

    def rec(r, chosen):
        if r == len(options):
            results.append(length_pi(chosen, n_p, pad))
            return
        for o in options[r]:
            rec(r + 1, chosen + ([o] if o is not None else []))

    rec(0, [])
    return results


def center_selection_length(matrix: BoxMatrix, n_p: int) -> int:
    """Length of the all-centre selection: n_p plus one per h centre."""
    hits = sum(1 for row in matrix.rows if row[matrix.center] == H)
    return n_p + hits


def is_balanced(matrix: BoxMatrix, lenient: bool = True) -> bool:
    """Every contiguous single-column run has h-count within pad/4 of half.

    In lenient mode rows containing any missing cell are skipped before
    the runs are formed; in strict mode missing cells raise.
    """
    pad = matrix.pad
    rows = []
    for row in matrix.rows:
        if any(c is None for c in row):
            if lenient:
                continue
            raise ValueError("matrix has missing cells")
        rows.append(row)
    if not rows:
        return True
    arr = np.asarray(rows)
    for c in range(arr.shape[1]):
        col = (arr[:, c] == H).astype(np.int64)
        csum = np.concatenate(([0], np.cumsum(col)))
        for a in range(len(col)):
            for b in range(a + 1, len(col) + 1):
                d = b - a
                cnt = csum[b] - csum[a]
                # |cnt - d/2| <= pad/4, kept in integers
                if not (2 * d - pad <= 4 * cnt <= 2 * d + pad):
                    return False
    return True


# -- trial harness ---------------------------------------------------------

REPORT_COLUMNS = ("trial", "t", "lcs", "ham", "min_edit",
                  "lcs_eq_n_minus_ham", "balanced")


def run_trial(n: int, trial: int, seed: int, *, include_min_edit: bool,
              lcs_oracle: str) -> List[dict]:
    """Records for every well-aligned arrival of one sampled stream.

    lcs_oracle "dp" uses the quadratic grid DP; "pi" uses the selection
    DP (exact at well-aligned arrivals); "auto" picks "dp" up to n=2**10
    and "pi" beyond, where the grid DP is impractical.
    """
    inst = build_fixed_string(n)
    stream = sample_stream(inst, [seed, trial])
    if lcs_oracle == "auto":
        lcs_oracle = "dp" if n <= 1 << 10 else "pi"
    min_edits = None
    if include_min_edit:
        full = oracles.online_edit_naive(inst.F, stream.S)
        min_edits = full[2 * n: 3 * n]
    records = []
    for t in well_aligned_arrivals(inst):
        assert is_well_aligned(inst, stream, t)
        window = oracles.window_view(stream.S, t, n)
        ham = int(np.count_nonzero(inst.F != window))
        assert ham == hamming_from_coins(inst, stream, t)
        matrix = build_matrix(inst, stream, t)
        if lcs_oracle == "dp":
            lcs_val = oracles.lcs(inst.F, window)
        else:
            lcs_val = max_length_over_pi(matrix, inst.n_p)
        rec = {
            "trial": trial,
            "t": t,
            "lcs": lcs_val,
            "ham": ham,
            "min_edit": int(min_edits[t]) if min_edits is not None else None,
            "lcs_eq_n_minus_ham": int(lcs_val == n - ham),
            "balanced": int(is_balanced(matrix)),
        }
        records.append(rec)
    return records


def trial_suite(n: int, trials: int, seed: int, *,
                      include_min_edit: bool = True,
                      lcs_oracle: str = "auto",
                      workers: int = 1) -> dict:
    """Run `trials` independent streams and aggregate the per-arrival facts."""
    records: List[dict] = []
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(run_trial, n, k, seed,
                                include_min_edit=include_min_edit,
                                lcs_oracle=lcs_oracle)
                    for k in range(trials)]
            for f in futs:
                records.extend(f.result())
    else:
        for k in range(trials):
            records.extend(run_trial(n, k, seed,
                                     include_min_edit=include_min_edit,
                                     lcs_oracle=lcs_oracle))
    total = len(records)
    eq = sum(r["lcs_eq_n_minus_ham"] for r in records)
    balanced = sum(r["balanced"] for r in records)
    squeeze_violations = 0
    conditional_violations = 0
    for r in records:
        if r["min_edit"] is not None:
            lo, mid, hi = n - r["lcs"], r["min_edit"], r["ham"]
            if not lo <= mid <= hi:
                squeeze_violations += 1
        if r["balanced"] and not r["lcs_eq_n_minus_ham"]:
            conditional_violations += 1
    inst = build_fixed_string(n)
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "pad": inst.pad,
        "pad_target": pad_target(n),
        "n_h": inst.n_h,
        "n_f": inst.n_f,
        "well_aligned_per_trial": len(well_aligned_arrivals(inst)),
        "samples": total,
        "fraction_lcs_eq_n_minus_ham": eq / total if total else 0.0,
        "balanced_fraction": balanced / total if total else 0.0,
        "squeeze_violations": squeeze_violations,
        "conditional_violations": conditional_violations,
        "records": records,
    }
