import numpy as np
import pytest

from probestream.oracles import (DpColumn, brute_force_min_edit, convolution,
                                 edge_weight, hamming, lcs, online_edit_naive,
                                 stream_outputs, window_view)


def test_edge_weights():
    F, S = [0, 1], [1, 0, 1]
    assert edge_weight("right", -1, 0, F, S) == 0
    assert edge_weight("right", 0, 0, F, S) == 1
    assert edge_weight("down", 1, 2, F, S) == 1
    # diag into row 0 consumes F[0]=0 against S[1]=0: match
    assert edge_weight("diag", -1, 0, F, S) == 0
    # diag into row 1 consumes F[1]=1 against S[1]=0: mismatch
    assert edge_weight("diag", 0, 0, F, S) == 1
    with pytest.raises(ValueError):
        edge_weight("sideways", 0, 0, F, S)


def test_online_edit_small_example():
    # F = "ab", S = "bab" with a=0, b=1
    assert online_edit_naive([0, 1], [1, 0, 1]).tolist() == [1, 1, 0]


def test_online_edit_prefix_match():
    rng = np.random.default_rng(5)
    F = rng.integers(0, 4, 16)
    out = online_edit_naive(F, F)
    assert out[-1] == 0


def test_consecutive_outputs_differ_by_at_most_one():
    rng = np.random.default_rng(6)
    for _ in range(20):
        F = rng.integers(0, 2, 16)
        S = rng.integers(0, 2, 48)
        out = online_edit_naive(F, S)
        assert np.all(np.abs(np.diff(out)) <= 1)


def test_brute_force_examples():
    assert brute_force_min_edit([0, 0, 0], [0, 0, 0]) == 0
    assert brute_force_min_edit([0, 1], [1, 0, 1]) == 0
    with pytest.raises(ValueError):
        brute_force_min_edit([0], list(range(600)))


def test_brute_force_agrees_with_online():
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(2, 33))
        q = int(rng.choice([2, 4]))
        F = rng.integers(0, q, n)
        S = rng.integers(0, q, int(rng.integers(1, 2 * n + 1)))
        out = online_edit_naive(F, S)
        assert out[-1] == brute_force_min_edit(F, S)


def test_hamming():
    assert hamming([0, 1, 0, 1], [0, 1, 0, 1]) == 0
    assert hamming([0, 1, 0, 1], [1, 0, 1, 0]) == 4
    rng = np.random.default_rng(8)
    F, W = rng.integers(0, 3, 50), rng.integers(0, 3, 50)
    assert hamming(F, W) == sum(int(a != b) for a, b in zip(F, W))
    with pytest.raises(ValueError):
        hamming([0], [0, 1])


def test_convolution():
    assert convolution([0, 0, 0], [5, 6, 7]) == 0
    assert convolution([1, 2], [3, 4]) == 11
    rng = np.random.default_rng(9)
    F, W = rng.integers(0, 8, 40), rng.integers(0, 8, 40)
    full = convolution(F, W)
    assert convolution(F, W, mod=8) == full % 8


def test_lcs_basics():
    assert lcs([0, 1, 2, 3], [0, 1, 2, 3]) == 4
    assert lcs([0, 0, 0], [1, 1, 1]) == 0
    # classic cross-check against a plain recursive-style DP
    rng = np.random.default_rng(10)
    for _ in range(25):
        n = int(rng.integers(2, 12))
        F = rng.integers(0, 3, n).tolist()
        W = rng.integers(0, 3, n).tolist()
        table = [[0] * (n + 1) for _ in range(n + 1)]
        for a in range(n):
            for b in range(n):
                table[a + 1][b + 1] = max(
                    table[a][b + 1], table[a + 1][b],
                    table[a][b] + (F[a] == W[b]))
        assert lcs(F, W) == table[n][n]


def test_window_view_alignment():
    n = 4
    S = np.arange(3 * n)
    assert window_view(S, 0, n).tolist() == [5, 6, 7, 8]
    assert window_view(S, n - 1, n).tolist() == [8, 9, 10, 11]
    with pytest.raises(ValueError):
        window_view(S, n, n)


def test_stream_outputs_shapes():
    rng = np.random.default_rng(12)
    n = 8
    F = rng.integers(0, 2, n)
    S = rng.integers(0, 2, 3 * n)
    for prob in ("hamming", "convolution", "lcs", "edit"):
        out = stream_outputs(prob, F, S)
        assert len(out) == n
    assert stream_outputs("hamming", F, S)[0] == hamming(F, window_view(S, 0, n))


def test_dpcolumn_shape_guard():
    col = DpColumn(4, 0, np.asarray([5, 5, 2, 1, 0]))
    assert col.finite_prefix_len() == 3
    bad = DpColumn(4, 0, np.asarray([0, 5, 2, 1, 0]))
    with pytest.raises(ValueError):
        bad.finite_prefix_len()
