"""Streaming pattern-matching laboratory with cell-probe accounting."""

from .core import (Alphabet, NormalizedProblem, SymbolRemap, SymbolString,
                   normalize_alphabet, pad_to_power_of_two)
from .editsim import (EditStream, ProbedNaiveEdit, predecessor, rho,
                      rho_gap_sum, run_edit_stream, normalized_edit_outputs)
from .memory import AccessLog, ProbeMemory
from .oracles import (DpColumn, brute_force_min_edit, convolution, hamming,
                      lcs, online_edit_naive, window_view)

__all__ = [
    "Alphabet", "NormalizedProblem", "SymbolRemap", "SymbolString",
    "normalize_alphabet", "pad_to_power_of_two",
    "EditStream", "ProbedNaiveEdit", "predecessor", "rho", "rho_gap_sum",
    "run_edit_stream", "normalized_edit_outputs",
    "AccessLog", "ProbeMemory",
    "DpColumn", "brute_force_min_edit", "convolution", "hamming", "lcs",
    "online_edit_naive", "window_view",
]

__version__ = "0.1.0"
