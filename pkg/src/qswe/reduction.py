"""Circuits to quadratically signed weight enumerators and back.

For a real circuit with gates ``k + s_j l sigma~_{b_j}`` the product expands as

    (k^2 + l^2)^(N/2) U = sum_a (-1)^(a^T (L + D) a) l^|a| k^(N - |a|) sigma~_{H a}

with ``H`` holding the gate indices as columns, ``L = lwtr(H^T B_sym H)`` and
``D`` marking the gates with ``s_j = -1``.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import ComplexGateError, InternalInvariantError, PreconditionViolated
from core.logger_utils import get_logger

from qswe.circuit_model import Circuit, Gate, conforming_epsilon
from qswe.enumerator import QsweInstance, p3_instance
from qswe.exact_sim import ScaledMatrix
from qswe.gf2_linalg import (
    BitMatrix,
    factor_rank,
    full_rank_replacement,
    has_unit_diagonal,
    inverse,
    lwtr,
    rank,
    row_reduce,
    vstack,
)
from qswe.pauli_algebra import (
    PauliIndex,
    check_dense_limit,
    even_odd_rows,
    signed_permutation,
    symplectic_gram,
    y_count,
)

logger = get_logger(__name__)


class ExpansionData(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    H: BitMatrix
    L: BitMatrix
    D: BitMatrix

    @property
    def sign_matrix(self) -> BitMatrix:
        return self.L + self.D

    @property
    def has_flipped_gates(self) -> bool:
        return not self.D.is_zero()


class SplitRows(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    H0: BitMatrix
    H1: BitMatrix


def split_rows(h: BitMatrix) -> SplitRows:
    """z rows (even, counted from zero) and x rows (odd) of ``H``."""

    h0, h1 = even_odd_rows(h)

    return SplitRows(H0=h0, H1=h1)


def gate_matrix(c: Circuit) -> BitMatrix:
    return BitMatrix.from_columns(2 * c.n, [gate.index.bits for gate in c.gates])


def expand(c: Circuit) -> ExpansionData:
    for position, gate in enumerate(c.gates, start=1):
        if not gate.is_real:
            raise ComplexGateError(position)

    h = gate_matrix(c)
    gram = symplectic_gram(h)
    if not has_unit_diagonal(gram):
        raise InternalInvariantError("Real gates must give diag(H^T B H) = I")

    size = c.size
    flipped = [int(gate.tilde_sign < 0) << j for j, gate in enumerate(c.gates)]

    return ExpansionData(H=h, L=lwtr(gram), D=BitMatrix(size, size, flipped))


def amplitude_instance(c: Circuit) -> QsweInstance:
    """Instance whose value is ``(k^2 + l^2)^(N/2) <0...0|U|0...0>``."""

    expansion = expand(c)
    rows = split_rows(expansion.H)

    return QsweInstance(A=rows.H1, B=expansion.sign_matrix, x=c.l, y=c.k)


def trace_instance(c: Circuit) -> QsweInstance:
    """Instance whose value is ``(k^2 + l^2)^(N/2) tr(U) / 2^n``."""

    expansion = expand(c)
    rows = split_rows(expansion.H)

    return QsweInstance(
        A=vstack(rows.H0, rows.H1), B=expansion.sign_matrix, x=c.l, y=c.k
    )


def compress_rows(h0: BitMatrix, h1: BitMatrix) -> SplitRows:
    """Drop to ``rank(H1)`` rows while keeping ``H0^T H1`` and ``ker H1``.

    With ``U H1 = R`` the pair ``(U^-T H0, R)`` has the same product, and only the
    non-zero rows of ``R`` contribute to it.
    """

    reduced, transform, r = row_reduce(h1)
    rotated = inverse(transform).transpose() @ h0
    keep = range(r)
    compressed = SplitRows(H0=rotated.select_rows(keep), H1=reduced.select_rows(keep))
    if compressed.H0.transpose() @ compressed.H1 != h0.transpose() @ h1:
        raise InternalInvariantError("Row compression changed H0^T H1")

    return compressed


def canonicalize_p3(c: Circuit) -> QsweInstance:
    """Rewrite the amplitude sum as ``(A', lwtr(A'))`` with ``diag(A') = I``."""

    expansion = expand(c)
    if expansion.has_flipped_gates:
        raise PreconditionViolated(
            "Nonconforming gates cannot be folded into (A, lwtr(A)); "
            "use the amplitude instance"
        )

    rows = split_rows(expansion.H)
    h0, h1 = rows.H0, rows.H1
    if rank(h0) != c.n:
        if c.size < c.n:
            rows = compress_rows(h0, h1)
            h0, h1 = rows.H0, rows.H1
        if rank(h0) != h0.rows:
            logger.info(
                "H0 is rank deficient, replacing columns.", qubits=h0.rows, gates=c.size
            )
            h0 = full_rank_replacement(h0, h1)

    a_prime = h0.transpose() @ h1
    if not has_unit_diagonal(a_prime) or lwtr(a_prime) != expansion.L:
        raise InternalInvariantError(
            "Canonical form lost diag(A') = I or the sign matrix"
        )

    return p3_instance(a_prime, x=c.l, y=c.k)


def _conforming_gate(n: int, z_mask: int, x_mask: int) -> Gate:
    index = PauliIndex.from_masks(n, z_mask, x_mask)

    return Gate(index=index, epsilon=conforming_epsilon(y_count(index)))


def p3_to_circuit(a: BitMatrix, k: int, l: int) -> Circuit:
    """Circuit with ``H0 = I`` and ``H1 = a``.

    Gate ``j`` has z-part ``e_j`` and x-part column ``j`` of ``a``.
    """

    if not has_unit_diagonal(a):
        raise PreconditionViolated("P3 matrices must be square with diag(A) = I")

    size = a.rows
    gates = tuple(_conforming_gate(size, 1 << j, a.column_bits(j)) for j in range(size))

    return Circuit(n=size, gates=gates, k=k, l=l)


def p4_to_circuit(c: BitMatrix, k: int, l: int) -> Circuit:
    """Circuit on ``rank(c)`` qubits with ``H0 = X^T`` and ``H1 = Y^T``.

    ``X`` and ``Y`` come from the factorization ``c = X Y^T``.
    """

    if not has_unit_diagonal(c):
        raise PreconditionViolated("P4 matrices must be square with diag(C) = I")

    x, y = factor_rank(c)
    qubits = x.cols
    gates = tuple(
        _conforming_gate(qubits, x.row_bits(j), y.row_bits(j)) for j in range(c.rows)
    )

    return Circuit(n=qubits, gates=gates, k=k, l=l)


def path_sum_matrix(c: Circuit, limit: int | None = None) -> ScaledMatrix:
    """The expansion summed term by term, as an unnormalized dense matrix."""

    check_dense_limit(c.n, limit)

    expansion = expand(c)
    columns = [gate.index.bits for gate in c.gates]
    sign_rows = expansion.sign_matrix.row_ints()
    dim = 1 << c.n
    size = c.size

    total = np.zeros((dim, dim), dtype=object)
    for a in range(1 << size):
        weight = a.bit_count()
        index_bits, form = 0, 0
        for j in range(size):
            if (a >> j) & 1:
                index_bits ^= columns[j]
                form ^= (sign_rows[j] & a).bit_count() & 1

        coefficient = c.l**weight * c.k ** (size - weight) * (-1 if form else 1)
        rows, signs = signed_permutation(PauliIndex(c.n, index_bits))
        total[rows, np.arange(dim)] += coefficient * signs.astype(object)

    return ScaledMatrix(
        n=c.n, re=total, im=np.zeros((dim, dim), dtype=object), scale=size, base=c.base
    )
