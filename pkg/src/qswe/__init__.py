from . import (
    circuit_model,
    enumerator,
    exact_sim,
    formats,
    gf2_linalg,
    pauli_algebra,
    reduction,
)
from .circuit_model import Circuit, Gate
from .enumerator import QsweInstance, evaluate, evaluate_naive
from .gf2_linalg import BitMatrix, BitVector

__all__ = [
    "BitMatrix",
    "BitVector",
    "Circuit",
    "Gate",
    "QsweInstance",
    "circuit_model",
    "enumerator",
    "evaluate",
    "evaluate_naive",
    "exact_sim",
    "formats",
    "gf2_linalg",
    "pauli_algebra",
    "reduction",
]
