"""Bit-addressed memory with per-cell probe accounting.

Memory is an unbounded array of w-bit cells.  Reads and writes may start
at any bit offset and span any number of bits; the charge for one call
is the number of distinct cells the bit range overlaps, i.e.
ceil((offset mod w + nbits) / w).  Computation between calls is free.
Every probed cell is appended to an access log tagged with the caller's
arrival clock, which is what the information-transfer analysis consumes.

Bit strings are passed around as (value, nbits) pairs where bit k of the
integer lives at bit address offset+k.
"""

from __future__ import annotations

import csv
import struct
from typing import Iterable, List, Tuple

KIND_READ = 0
KIND_WRITE = 1

_RECORD = struct.Struct("<IQB")  # arrival, cell address, kind


class AccessLog:
    """Flat list of (arrival, cell, kind) probe records."""

    def __init__(self, entries: Iterable[Tuple[int, int, int]] = ()):
        self.entries: List[Tuple[int, int, int]] = list(entries)

    def append(self, t: int, cell: int, kind: int) -> None:
        self.entries.append((t, cell, kind))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def reads(self):
        return [e for e in self.entries if e[2] == KIND_READ]

    def writes(self):
        return [e for e in self.entries if e[2] == KIND_WRITE]

    def to_binary(self, path) -> None:
        with open(path, "wb") as fh:
            for t, cell, kind in self.entries:
                fh.write(_RECORD.pack(t, cell, kind))

    @classmethod
    def from_binary(cls, path) -> "AccessLog":
        log = cls()
        with open(path, "rb") as fh:
            data = fh.read()
        if len(data) % _RECORD.size:
            raise ValueError("truncated trace file")
        for off in range(0, len(data), _RECORD.size):
            t, cell, kind = _RECORD.unpack_from(data, off)
            log.append(t, cell, kind)
        return log

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["t", "address", "kind"])
            for t, cell, kind in self.entries:
                out.writerow([t, cell, "read" if kind == KIND_READ else "write"])


class ProbeMemory:
    """w-bit-cell memory charging one probe per distinct touched cell."""

    def __init__(self, w: int = 64, log: bool = True):
        if w < 1:
            raise ValueError("cell width must be positive")
        self.w = w
        self.cells = {}
        self.read_probes = 0
        self.write_probes = 0
        self.uninitialized_reads = 0
        self.log = AccessLog() if log else None

    def _cell_span(self, offset: int, nbits: int) -> range:
        if offset < 0 or nbits < 1:
            raise ValueError("bad bit range")
        return range(offset // self.w, (offset + nbits - 1) // self.w + 1)

    def write_bits(self, offset: int, value: int, nbits: int, t: int = 0) -> int:
        """Store nbits of value at the given bit offset; returns probes."""
        w = self.w
        span = self._cell_span(offset, nbits)
        for cell in span:
            lo = max(offset, cell * w)
            hi = min(offset + nbits, (cell + 1) * w)
            chunk = (value >> (lo - offset)) & ((1 << (hi - lo)) - 1)
            shift = lo - cell * w
            keep = ~(((1 << (hi - lo)) - 1) << shift)
            self.cells[cell] = (self.cells.get(cell, 0) & keep) | (chunk << shift)
            if self.log is not None:
                self.log.append(t, cell, KIND_WRITE)
        self.write_probes += len(span)
        return len(span)

    def read_bits(self, offset: int, nbits: int, t: int = 0) -> Tuple[int, int]:
        """Fetch nbits at the given bit offset; returns (value, probes)."""
        w = self.w
        span = self._cell_span(offset, nbits)
        value = 0
        for cell in span:
            if cell not in self.cells:
                self.uninitialized_reads += 1
            lo = max(offset, cell * w)
            hi = min(offset + nbits, (cell + 1) * w)
            chunk = (self.cells.get(cell, 0) >> (lo - cell * w)) & ((1 << (hi - lo)) - 1)
            value |= chunk << (lo - offset)
            if self.log is not None:
                self.log.append(t, cell, KIND_READ)
        self.read_probes += len(span)
        return value, len(span)

    @property
    def total_probes(self) -> int:
        return self.read_probes + self.write_probes

    def probe_stats(self, t_lo: int, t_hi: int) -> dict:
        """Probe totals for arrivals in [t_lo, t_hi]; bits count w per cell."""
        if self.log is None:
            raise ValueError("memory was created without a log")
        reads = writes = 0
        for t, _, kind in self.log:
            if t_lo <= t <= t_hi:
                if kind == KIND_READ:
                    reads += 1
                else:
                    writes += 1
        return {"reads": reads, "writes": writes,
                "bits_read": reads * self.w, "bits_written": writes * self.w}
