"""Run-structured column encoding.

A stored column is described from the output row (j = n-1) downward as a
sequence of blocks: maximal runs whose values decrease by exactly one
per row.  Two equal consecutive values therefore end a block, as does
any other deviation from a -1 step.  Encoding writes one header field
(the block count) followed by a (start_value, length) pair per block;
start rows are implied by the cumulative lengths, and rows not covered
by any encoded block decode to the infinity sentinel n+1.

All fields are ceil(log2(n+2)) bits, wide enough for any value in
[0, n], any length in [1, n+1] and any block count up to n+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .oracles import DpColumn, inf_value


def field_width(n: int) -> int:
    """ceil(log2(n+2)): bits per header/value/length field."""
    return (n + 1).bit_length()


@dataclass(frozen=True)
class Block:
    start_value: int
    length: int


@dataclass
class BlockList:
    n: int
    blocks: Tuple[Block, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def start_rows(self) -> List[int]:
        """Row j where each block begins, walking down from j = n-1."""
        rows = []
        offset = 0
        for b in self.blocks:
            rows.append(self.n - 1 - offset)
            offset += b.length
        return rows

    def covered_rows(self) -> int:
        return sum(b.length for b in self.blocks)


def decompose_blocks(column: DpColumn) -> BlockList:
    """Split a column's finite prefix into maximal -1-step runs."""
    n = column.n
    fin = column.finite_prefix_len()
    top_down = column.values[::-1][:fin]
    blocks = []
    m = 0
    while m < fin:
        start = m
        while m + 1 < fin and top_down[m + 1] == top_down[m] - 1:
            m += 1
        m += 1
        blocks.append(Block(int(top_down[start]), m - start))
    return BlockList(n, tuple(blocks))


def block_index(j: int, bl: BlockList) -> int:
    """1-based block number of row j; the infinite region counts as B+1."""
    if not -1 <= j <= bl.n - 1:
        raise ValueError("row out of range")
    m = bl.n - 1 - j  # position in top-down order
    offset = 0
    for idx, b in enumerate(bl.blocks, 1):
        offset += b.length
        if m < offset:
            return idx
    return len(bl.blocks) + 1


def encode_column(bl: BlockList, limit: int) -> Tuple[int, int]:
    """Encode the first min(B, limit) blocks as a little-endian bit string.

    Returns (bits, nbits).  Bit k of the integer is the bit stored at
    relative address k.
    """
    n = bl.n
    width = field_width(n)
    keep = bl.blocks[:min(len(bl.blocks), limit)]
    fields = [len(keep)]
    for b in keep:
        if not 0 <= b.start_value <= n:
            raise ValueError(f"block value {b.start_value} out of [0, {n}]")
        if not 1 <= b.length <= n + 1:
            raise ValueError("block length out of range")
        fields.extend((b.start_value, b.length))
    bits = 0
    pos = 0
    for f in fields:
        bits |= f << pos
        pos += width
    assert pos <= (2 * limit + 1) * width
    return bits, pos


def decode_records(bits: int, count: int, n: int) -> np.ndarray:
    """Rebuild column values from `count` leading records of a bit string."""
    width = field_width(n)
    mask = (1 << width) - 1
    values = np.full(n + 1, inf_value(n), dtype=np.int64)
    pos = width  # skip header; caller already consumed it
    row = n - 1
    for _ in range(count):
        start = (bits >> pos) & mask
        length = (bits >> (pos + width)) & mask
        pos += 2 * width
        for step in range(length):
            if row < -1:
                raise ValueError("encoded blocks overrun the column")
            values[row + 1] = start - step
            row -= 1
    return values


def decode_column(bits: int, nbits: int, n: int) -> DpColumn:
    """Inverse of encode_column; uncovered rows decode to n+1."""
    width = field_width(n)
    if nbits < width:
        raise ValueError("bit string shorter than its header")
    count = bits & ((1 << width) - 1)
    if nbits < (1 + 2 * count) * width:
        raise ValueError("bit string shorter than its declared records")
    return DpColumn(n, -1, decode_records(bits, count, n))
