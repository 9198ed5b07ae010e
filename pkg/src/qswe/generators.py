"""Seeded random circuits, matrices and instances.

All generators take a ``numpy.random.Generator`` so a seed fixes every draw.
"""

import numpy as np

from core.errors import PreconditionViolated

from qswe.circuit_model import Circuit, Gate, Orientation, conforming_epsilon
from qswe.enumerator import QsweInstance
from qswe.gf2_linalg import BitMatrix
from qswe.pauli_algebra import PauliIndex, y_count

_Y_PAIR = 0b11


def _pair_pattern(rng: np.random.Generator, n: int) -> list[int]:
    """Per-qubit ``(z, x)`` pairs, not all identity."""

    pairs = [int(p) for p in rng.integers(0, 4, size=n)]
    if not any(pairs):
        pairs[int(rng.integers(n))] = _Y_PAIR

    return pairs


def _pack(pairs: list[int]) -> int:
    bits = 0
    for q, pair in enumerate(pairs):
        bits |= pair << (2 * q)

    return bits


def random_orientation(rng: np.random.Generator) -> Orientation:
    return 1 if rng.integers(2) else -1


def random_gate(
    rng: np.random.Generator, n: int, epsilon: Orientation | None = None
) -> Gate:
    """A real gate: an odd number of Y factors.

    When the drawn pattern has an even Y count, one uniformly chosen qubit is
    toggled between Y and a non-Y factor.
    """

    if n < 1:
        raise PreconditionViolated("A real gate needs at least one qubit")

    pairs = _pair_pattern(rng, n)
    if sum(pair == _Y_PAIR for pair in pairs) % 2 == 0:
        q = int(rng.integers(n))
        if pairs[q] == _Y_PAIR:
            pairs[q] = int(rng.choice([0b01, 0b10]))
        else:
            pairs[q] = _Y_PAIR

    index = PauliIndex(n, _pack(pairs))
    if epsilon is None:
        epsilon = conforming_epsilon(y_count(index))

    return Gate(index=index, epsilon=epsilon)


def random_circuit(
    rng: np.random.Generator,
    n: int,
    size: int,
    k: int = 4,
    l: int = 3,
    conforming: bool = True,
) -> Circuit:
    """Real circuit; with ``conforming=False`` each orientation is drawn at random."""

    gates = tuple(
        random_gate(rng, n, epsilon=None if conforming else random_orientation(rng))
        for _ in range(size)
    )

    return Circuit(n=n, gates=gates, k=k, l=l)


def random_mixed_circuit(
    rng: np.random.Generator, n: int, size: int, k: int = 4, l: int = 3
) -> Circuit:
    """Any non-identity Pauli rotations, complex ones included.

    Orientations are drawn at random.
    """

    if n < 1 and size:
        raise PreconditionViolated("Gates need at least one qubit")

    gates = tuple(
        Gate(
            index=PauliIndex(n, _pack(_pair_pattern(rng, n))),
            epsilon=random_orientation(rng),
        )
        for _ in range(size)
    )

    return Circuit(n=n, gates=gates, k=k, l=l)


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> BitMatrix:
    entries = rng.integers(0, 2, size=(rows, cols))

    return BitMatrix.from_lists([[int(v) for v in row] for row in entries], ncols=cols)


def random_p3_matrix(rng: np.random.Generator, n: int) -> BitMatrix:
    """Square matrix with unit diagonal and uniform off-diagonal entries."""

    a = random_matrix(rng, n, n)

    return BitMatrix(n, n, [row | (1 << i) for i, row in enumerate(a.row_ints())])


def random_instance(
    rng: np.random.Generator, n: int, m: int, x: int = 4, y: int = 3
) -> QsweInstance:
    return QsweInstance(
        A=random_matrix(rng, m, n), B=random_matrix(rng, n, n), x=x, y=y
    )
