import numpy as np
import pytest

from probestream.core import (Alphabet, SymbolRemap, SymbolString,
                              normalize_alphabet, pad_to_power_of_two)
from probestream.oracles import hamming, lcs, online_edit_naive


def test_alphabet_basics():
    a = Alphabet(2)
    assert a.size == 4
    assert a.contains(3) and not a.contains(4)
    with pytest.raises(ValueError):
        Alphabet(0)


def test_symbol_string_roundtrip():
    s = SymbolString.of([3, 1, 4, 1])
    assert len(s) == 4 and s[2] == 4
    assert s.to_array().tolist() == [3, 1, 4, 1]


def test_remap_first_occurrence_order():
    r = SymbolRemap.from_fixed([7, 7, 2, 9, 2])
    assert [r.apply(c) for c in (7, 2, 9)] == [0, 1, 2]
    # everything outside F collapses onto one spare code
    assert r.apply(5) == r.apply(100) == 3
    assert r.code_count == 4
    assert normalize_alphabet([7, 7, 2, 9, 2], 9) == 2


def test_remap_preserves_comparisons_against_fixed():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(4, 40))
        F = rng.integers(0, 1000, n)
        S = rng.integers(0, 1000, 3 * n)
        r = SymbolRemap.from_fixed(F)
        Fm, Sm = r.apply_all(F), r.apply_all(S)
        assert hamming(F[:n], S[:n]) == hamming(Fm[:n], Sm[:n])
        assert lcs(F, S[:n]) == lcs(Fm, Sm[:n])
        assert np.array_equal(online_edit_naive(F, S),
                              online_edit_naive(Fm, Sm))


def test_padding_sizes_and_offsets():
    p = pad_to_power_of_two(np.arange(16))
    assert p.n_prime == 16 and p.offset == 0
    p = pad_to_power_of_two(np.arange(9))
    assert p.n_prime == 16 and p.offset == 7
    assert list(p.F_prime)[:7] == [p.sigma] * 7


def test_padding_symbol_absent_from_streams():
    p = pad_to_power_of_two([5, 6, 5])
    stream = p.normalize_stream([5, 6, 7, 8, 9])
    assert p.sigma not in stream.tolist()


def test_padding_preserves_edit_outputs():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(3, 30))
        F = rng.integers(0, 4, n)
        S = rng.integers(0, 5, 2 * n)  # includes symbols outside F
        p = pad_to_power_of_two(F)
        raw = online_edit_naive(p.F_prime, p.normalize_stream(S))
        corrected = [p.correct_output(v) for v in raw]
        assert corrected == online_edit_naive(F, S).tolist()
