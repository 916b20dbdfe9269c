"""Alphabet and string primitives plus input normalisation.

The streaming engines downstream assume two things that arbitrary inputs
do not provide: a compact alphabet (at most n+1 distinct codes actually
matter) and, for the cell-probe edit-distance engine, a fixed string
whose length is a power of two.  This module supplies both reductions:

* every symbol that does not occur in the fixed string is collapsed onto
  a single spare code (equality against the fixed string is all any of
  the engines ever test, so Hamming, edit and LCS outputs are unchanged);
* the fixed string is left-padded with a fresh symbol sigma that never
  occurs in the stream, up to the next power of two.  Each padding symbol
  costs exactly one unavoidable edit, so every output of the padded
  problem is the original output plus a constant offset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple, Union

import numpy as np

Codes = Union["SymbolString", Sequence[int], np.ndarray]


@dataclass(frozen=True)
class Alphabet:
    """Symbol universe of ``2**delta`` codes, each ``delta`` bits wide."""

    delta: int

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be >= 1")

    @property
    def size(self) -> int:
        return 1 << self.delta

    def contains(self, code: int) -> bool:
        return 0 <= code < self.size


@dataclass(frozen=True)
class SymbolString:
    """Immutable sequence of integer symbol codes."""

    symbols: Tuple[int, ...]

    @classmethod
    def of(cls, codes: Codes) -> "SymbolString":
        if isinstance(codes, SymbolString):
            return codes
        return cls(tuple(int(c) for c in codes))

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, idx):
        return self.symbols[idx]

    def __iter__(self):
        return iter(self.symbols)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.symbols, dtype=np.int64)


def as_codes(x: Codes) -> np.ndarray:
    """Coerce any accepted string representation to an int64 array."""
    if isinstance(x, SymbolString):
        return x.to_array()
    a = np.asarray(x, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError("expected a one-dimensional code sequence")
    return a


@dataclass(frozen=True)
class SymbolRemap:
    """Remap built from a fixed string F.

    Codes occurring in F are renumbered 0..k-1 in order of first
    occurrence; every other code maps to the spare code k.  The map is
    injective on F's codes, so it preserves the outcome of every
    equality test against a symbol of F.
    """

    table: Tuple[Tuple[int, int], ...]
    spare: int

    @classmethod
    def from_fixed(cls, F: Codes) -> "SymbolRemap":
        arr = as_codes(F)
        seen: Dict[int, int] = {}
        for c in arr.tolist():
            if c not in seen:
                seen[c] = len(seen)
        return cls(table=tuple(seen.items()), spare=len(seen))

    def _dict(self) -> Dict[int, int]:
        return dict(self.table)

    def apply(self, code: int) -> int:
        return self._dict().get(int(code), self.spare)

    def apply_all(self, codes: Codes) -> np.ndarray:
        d = self._dict()
        arr = as_codes(codes)
        return np.asarray([d.get(c, self.spare) for c in arr.tolist()],
                          dtype=np.int64)

    @property
    def code_count(self) -> int:
        """Number of codes in the image, spare included."""
        return len(self.table) + 1


def normalize_alphabet(F: Codes, incoming: int) -> int:
    """Map one incoming symbol through the remap induced by F."""
    return SymbolRemap.from_fixed(F).apply(incoming)


@dataclass(frozen=True)
class NormalizedProblem:
    """A fixed string brought to compact-alphabet, power-of-two shape.

    ``offset`` is the number of padding symbols prepended; subtract it
    from every edit-distance output of the padded problem to recover the
    original output.  ``sigma`` is the padding code and never occurs in
    any remapped stream symbol.
    """

    F_prime: SymbolString
    n_prime: int
    offset: int
    sigma: int
    remap: SymbolRemap

    @property
    def delta(self) -> int:
        """Bits per symbol needed after normalisation."""
        return max(1, int(self.sigma).bit_length())

    def normalize_stream(self, codes: Codes) -> np.ndarray:
        return self.remap.apply_all(codes)

    def correct_output(self, raw: int) -> int:
        return raw - self.offset


def _next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError("length must be positive")
    return 1 << (n - 1).bit_length()


def pad_to_power_of_two(F: Codes) -> NormalizedProblem:
    """Remap F's alphabet and left-pad F to the next power of two.

    The padding symbol is the first code outside the remap's image, so it
    can never collide with a remapped stream symbol.
    """
    remap = SymbolRemap.from_fixed(F)
    mapped = remap.apply_all(F)
    n = len(mapped)
    n_prime = _next_power_of_two(n)
    sigma = remap.spare + 1
    padded = np.concatenate(
        [np.full(n_prime - n, sigma, dtype=np.int64), mapped])
    return NormalizedProblem(
        F_prime=SymbolString(tuple(int(c) for c in padded)),
        n_prime=n_prime,
        offset=n_prime - n,
        sigma=sigma,
        remap=remap,
    )
