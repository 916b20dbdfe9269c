"""Cell-probe engine for the online suffix-minimising edit distance.

The engine keeps no state of its own between arrivals beyond a counter:
everything it consults lives in a ProbeMemory instance and every access
is charged.  Per arrival i > 0 it

1. appends the arriving symbol to a circular stream region and re-reads
   the recent substring S[rho(i) .. i-1],
2. reads the stored column rho(i) (the "alg1" variant reads all of its
   blocks, "alg2" only the first 8*(i - rho(i))),
3. relaxes shortest paths across the grid slab between columns rho(i)
   and i, truncates the result to its first 3*(i - rho(i)) blocks and
   writes it back run-encoded, and
4. emits the value at the output row, which is exact at every arrival
   even though inner rows may be truncated away.

rho(i) clears the lowest set bit of i but never reaches back more than n
columns.  The alternation of short and long reach-backs is what makes
the amortised probe count polylogarithmic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .blocks import (BlockList, decode_records, decompose_blocks,
                     encode_column, field_width)
from .core import Codes, as_codes, pad_to_power_of_two
from .memory import ProbeMemory
from .oracles import DpColumn, inf_value


def predecessor(i: int) -> int:
    """i with its lowest set bit cleared."""
    if i <= 0:
        raise ValueError("defined for positive i only")
    return i & (i - 1)


def rho(i: int, n: int) -> int:
    """Reach-back column for arrival i, capped at i - n."""
    p = predecessor(i)
    return p if p > i - n else i - n


def rho_gap_sum(i_start: int, count: int, n: int) -> int:
    """Sum of i - rho(i) over `count` arrivals starting at i_start >= 1."""
    return sum(i - rho(i, n) for i in range(i_start, i_start + count))


def max_gap_window_sum(n: int, i_max: Optional[int] = None) -> int:
    """Largest sum of i - rho(i) over any window of n arrivals.

    Scans every window start in [1, i_max] (default 2n), by which point
    the gap sequence is periodic because of the i - n cap.
    """
    if i_max is None:
        i_max = 2 * n
    top = i_max + n
    i = np.arange(1, top + 1, dtype=np.int64)
    gaps = np.minimum(i & -i, n)
    sums = np.cumsum(gaps)
    window = sums[n - 1:] - np.concatenate(([0], sums[:-n]))
    return int(window[:i_max].max())


def slab_shortest(d_src: np.ndarray, slab_symbols: np.ndarray,
                  F: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Shortest paths across a slab seeded with a stored column.

    d_src holds column rho(i) with the n+1 sentinel for infinities;
    slab_symbols are S[rho(i)+1 .. i] in order.  Returns (values, srcs)
    for column i where srcs[k] is the row index j' (as k' = j'+1) of the
    seed entry realising the minimum, smallest j' on ties; src is -1
    where the value is infinite.

    Values and sources are packed into a single integer key so that the
    running minima propagate the lexicographic (value, source) order.
    """
    n = len(F)
    K = n + 2
    BIG = 4 * n + 8
    ar = K * np.arange(n + 1, dtype=np.int64)
    src_ids = np.arange(n + 1, dtype=np.int64)
    finite = d_src <= n
    key = np.where(finite, d_src * K + src_ids, BIG * K)
    # vertical edges inside the seed column
    key = np.minimum.accumulate(key - ar) + ar
    for sym in slab_symbols:
        cost = (F != sym).astype(np.int64)
        cand = np.empty(n + 1, dtype=np.int64)
        cand[0] = key[0]  # row -1 moves right for free
        cand[1:] = np.minimum(key[1:] + K, key[:-1] + K * cost)
        key = np.minimum.accumulate(cand - ar) + ar
    vals = key // K
    srcs = key % K - 1
    infinite = vals > n
    out = np.where(infinite, inf_value(n), vals)
    srcs = np.where(infinite, -2, srcs)
    # a finite row always has a finite row directly above it, and moving
    # down the column a value can rise by at most one
    fin = out <= n
    assert np.all(fin[:-1] <= fin[1:])
    assert np.all(~fin[:-1] | (out[:-1] <= out[1:] + 1))
    return out.astype(np.int64), srcs.astype(np.int64)


def truncate_column_values(vals: np.ndarray, limit: int) -> np.ndarray:
    """Keep only the first `limit` blocks (from the output row); rest to inf."""
    n = len(vals) - 1
    inf = inf_value(n)
    flipped = vals[::-1]
    bad = np.nonzero(flipped > n)[0]
    fin = n + 1 if len(bad) == 0 else int(bad[0])
    if np.any(flipped[fin:] <= n):
        raise ValueError("finite entries must be contiguous from the top")
    if fin == 0:
        return vals.copy()
    top = flipped[:fin]
    boundary = np.empty(fin, dtype=bool)
    boundary[0] = True
    boundary[1:] = top[1:] != top[:-1] - 1
    block_id = np.cumsum(boundary)
    kept = np.where(block_id <= limit, top, inf)
    out = vals.copy()
    out[::-1][:fin] = kept
    return out


def column_block_ids(vals: np.ndarray) -> np.ndarray:
    """1-based block number per column entry; the infinite region is B+1."""
    n = len(vals) - 1
    flipped = vals[::-1]
    bad = np.nonzero(flipped > n)[0]
    fin = n + 1 if len(bad) == 0 else int(bad[0])
    ids = np.empty(n + 1, dtype=np.int64)
    if fin:
        top = flipped[:fin]
        boundary = np.empty(fin, dtype=bool)
        boundary[0] = True
        boundary[1:] = top[1:] != top[:-1] - 1
        ids[::-1][:fin] = np.cumsum(boundary)
        nblocks = int(ids[n + 1 - fin])
    else:
        nblocks = 0
    ids[::-1][fin:] = nblocks + 1
    return ids


@dataclass
class MinimizerRecord:
    """Where arrival i found its optima inside stored column rho(i).

    srcs[k] is the seed row j' = srcs[k] - 1 chosen for the finite row
    at column position k (-2 where the row is infinite after truncation).
    """

    i: int
    rho_i: int
    max_block: int
    cap: int
    srcs: np.ndarray


class EditStream:
    """Probe-charged online edit distance over simulated memory.

    F must have power-of-two length and symbols below 2**delta; use
    normalized_edit_outputs for arbitrary inputs.  Accesses to F, the
    just-arrived symbol and the emitted output are free unless
    charge_arrival re-reads the arriving symbol from memory.
    """

    def __init__(self, F: Codes, *, w: int = 64, delta: Optional[int] = None,
                 variant: str = "alg2", charge_arrival: bool = False,
                 track_minimizers: bool = False,
                 memory: Optional[ProbeMemory] = None):
        self.F = as_codes(F)
        n = len(self.F)
        if n < 2 or n & (n - 1):
            raise ValueError("|F| must be a power of two, at least 2")
        if variant not in ("alg1", "alg2"):
            raise ValueError(f"unknown variant {variant!r}")
        if track_minimizers and variant != "alg1":
            raise ValueError("minimizer tracking needs the full-read variant")
        self.n = n
        self.delta = delta if delta is not None else max(
            1, int(self.F.max()).bit_length())
        self.variant = variant
        self.charge_arrival = charge_arrival
        self.mem = memory if memory is not None else ProbeMemory(w)
        self.W = field_width(n)
        # one slot per live column, rounded up to a cell boundary so
        # separate slots never share a cell
        raw = (6 * n + 1) * self.W
        self.slot_bits = -(-raw // self.mem.w) * self.mem.w
        self.stream_base = (n + 1) * self.slot_bits
        self.i = 0
        self.track_minimizers = track_minimizers
        self.minimizers: List[MinimizerRecord] = []

    # -- address helpers -------------------------------------------------
    def _col_addr(self, i: int) -> int:
        return (i % (self.n + 1)) * self.slot_bits

    def _sym_addr(self, i: int) -> int:
        return self.stream_base + (i % (self.n + 1)) * self.delta

    # -- memory traffic --------------------------------------------------
    def _write_column(self, i: int, vals: np.ndarray) -> BlockList:
        bl = decompose_blocks(DpColumn(self.n, i, vals))
        bits, nbits = encode_column(bl, len(bl))
        self.mem.write_bits(self._col_addr(i), bits, nbits, t=i)
        return bl

    def _read_column(self, src: int, cap: Optional[int],
                     t: int) -> Tuple[np.ndarray, int, int]:
        """Read column `src`, capped at `cap` blocks; returns (vals, B, bits).

        For src >= 1 the writer truncated the column to 3*(src - rho(src))
        blocks, a bound computable without touching memory, so header and
        records come back in a single call.  Column 0 was stored without
        truncation and needs a header probe first.
        """
        base = self._col_addr(src)
        w, W = self.mem.w, self.W
        if src >= 1:
            bound = min(3 * (src - rho(src, self.n)), self.n + 1)
            if cap is not None:
                bound = min(bound, cap)
            v, _ = self.mem.read_bits(base, (1 + 2 * bound) * W, t=t)
            stored = v & ((1 << W) - 1)
            count = stored if cap is None else min(stored, cap)
            assert count <= bound
            return decode_records(v, count, self.n), stored, count
        # fetch whole cells so the follow-up read never re-touches one
        bits1 = -(-W // w) * w
        v, _ = self.mem.read_bits(base, bits1, t=t)
        stored = v & ((1 << W) - 1)
        count = stored if cap is None else min(stored, cap)
        total = (1 + 2 * count) * W
        if total > bits1:
            v2, _ = self.mem.read_bits(base + bits1, total - bits1, t=t)
            v |= v2 << bits1
        return decode_records(v, count, self.n), stored, count

    def _read_stream_range(self, a: int, b: int, t: int) -> List[int]:
        """Charged read of S[a..b] from the circular stream region."""
        npos = self.n + 1
        out: List[int] = []
        start = a
        while start <= b:
            slot = start % npos
            run = min(b - start + 1, npos - slot)
            v, _ = self.mem.read_bits(self.stream_base + slot * self.delta,
                                      run * self.delta, t=t)
            mask = (1 << self.delta) - 1
            out.extend((v >> (k * self.delta)) & mask for k in range(run))
            start += run
        return out

    # -- the per-arrival step --------------------------------------------
    def arrival(self, symbol: int) -> int:
        symbol = int(symbol)
        if not 0 <= symbol < (1 << self.delta):
            raise ValueError("symbol does not fit the declared alphabet")
        i = self.i
        n = self.n
        self.mem.write_bits(self._sym_addr(i), symbol, self.delta, t=i)
        if self.charge_arrival:
            self.mem.read_bits(self._sym_addr(i), self.delta, t=i)
        if i == 0:
            # the first column is exact and cheap to build directly
            seed = np.arange(n + 1, dtype=np.int64)
            vals, _ = slab_shortest(seed, np.asarray([symbol]), self.F)
            self._write_column(0, vals)
            self.i += 1
            return int(vals[n])
        r = rho(i, n)
        gap = i - r
        recent = self._read_stream_range(r, i - 1, t=i)
        slab = np.asarray(recent[1:] + [symbol], dtype=np.int64)
        cap = None if self.variant == "alg1" else 8 * gap
        src_vals, stored_blocks, _ = self._read_column(r, cap, t=i)
        vals, srcs = slab_shortest(src_vals, slab, self.F)
        out = int(vals[n])
        dvals = truncate_column_values(vals, 3 * gap)
        if self.track_minimizers:
            self._record_minimizers(i, r, gap, src_vals, dvals, srcs)
        self._write_column(i, dvals)
        self.i += 1
        return out

    def _record_minimizers(self, i, r, gap, src_vals, dvals, srcs):
        bids = column_block_ids(src_vals)
        finite = dvals <= self.n
        kept = np.where(finite, srcs, -2)
        worst = int(bids[kept[finite] + 1].max()) if finite.any() else 0
        self.minimizers.append(
            MinimizerRecord(i, r, worst, 8 * gap, kept))

    def run(self, S: Codes) -> np.ndarray:
        return np.asarray([self.arrival(s) for s in as_codes(S)],
                          dtype=np.int64)

    def stored_column(self, i: int) -> DpColumn:
        """Decode a stored column without charging probes (debug/test)."""
        saved = self.mem.log
        self.mem.log = None
        try:
            vals, _, _ = self._read_column(i, None, t=-1)
        finally:
            self.mem.log = saved
        return DpColumn(self.n, i, vals)


class ProbedNaiveEdit:
    """Baseline engine that rewrites the whole column every arrival."""

    def __init__(self, F: Codes, *, w: int = 64,
                 memory: Optional[ProbeMemory] = None):
        self.F = as_codes(F)
        self.n = len(self.F)
        self.mem = memory if memory is not None else ProbeMemory(w)
        self.W = field_width(self.n)
        raw = (self.n + 1) * self.W
        self.slot_bits = -(-raw // self.mem.w) * self.mem.w
        self.i = 0

    def _pack(self, vals: np.ndarray) -> int:
        bits = 0
        for k, v in enumerate(vals.tolist()):
            bits |= int(v) << (k * self.W)
        return bits

    def _unpack(self, bits: int) -> np.ndarray:
        mask = (1 << self.W) - 1
        return np.asarray([(bits >> (k * self.W)) & mask
                           for k in range(self.n + 1)], dtype=np.int64)

    def arrival(self, symbol: int) -> int:
        n = self.n
        nbits = (n + 1) * self.W
        if self.i == 0:
            prev = np.arange(n + 1, dtype=np.int64)
        else:
            v, _ = self.mem.read_bits(((self.i - 1) % 2) * self.slot_bits,
                                      nbits, t=self.i)
            prev = self._unpack(v)
        vals, _ = slab_shortest(prev, np.asarray([symbol]), self.F)
        self.mem.write_bits((self.i % 2) * self.slot_bits,
                            self._pack(vals), nbits, t=self.i)
        self.i += 1
        return int(vals[n])

    def run(self, S: Codes) -> np.ndarray:
        return np.asarray([self.arrival(s) for s in as_codes(S)],
                          dtype=np.int64)


def run_edit_stream(F: Codes, S: Codes, *, w: int = 64, variant: str = "alg2",
                    delta: Optional[int] = None, charge_arrival: bool = False,
                    track_minimizers: bool = False) -> Tuple[np.ndarray, EditStream]:
    eng = EditStream(F, w=w, variant=variant, delta=delta,
                     charge_arrival=charge_arrival,
                     track_minimizers=track_minimizers)
    outputs = eng.run(S)
    return outputs, eng


def normalized_edit_outputs(F_raw: Codes, S_raw: Codes, *, w: int = 64,
                            variant: str = "alg2") -> Tuple[np.ndarray, EditStream]:
    """Run the engine on arbitrary inputs via alphabet remap and padding."""
    prob = pad_to_power_of_two(F_raw)
    stream = prob.normalize_stream(S_raw)
    eng = EditStream(prob.F_prime, w=w, variant=variant, delta=prob.delta)
    raw = eng.run(stream)
    return raw - prob.offset, eng
