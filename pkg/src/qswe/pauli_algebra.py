"""Signed Pauli products in the symplectic 0-1 representation.

A Pauli index on ``n`` qubits packs pairs ``(z_q, x_q)`` into one integer: bit
``2q`` is ``z_q`` and bit ``2q + 1`` is ``x_q``. The pairs read 00 = I, 01 = X,
11 = Y and 10 = Z. All public operators are the real-normalized products
``(-i)^{y_count} * sigma_b``, which are signed permutation matrices.

In dense matrices qubit 0 is the most significant bit of the basis index.
"""

from typing import Self

import numpy as np

from core.config import settings
from core.errors import (
    DimensionMismatch,
    FormatError,
    LimitExceeded,
    PreconditionViolated,
)

from qswe.gf2_linalg import BitMatrix, BitVector, lwtr

_PAULI_CHARS = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}
_PAIR_CHARS = {pair: char for char, pair in _PAULI_CHARS.items()}

_EVEN_BITS_CACHE: dict[int, int] = {}


def _even_mask(n: int) -> int:
    if n not in _EVEN_BITS_CACHE:
        _EVEN_BITS_CACHE[n] = sum(1 << (2 * q) for q in range(n))

    return _EVEN_BITS_CACHE[n]


def _compress_even(bits: int, n: int) -> int:
    """Gather bits 0, 2, 4, ... of ``bits`` into a dense ``n``-bit integer."""

    out = 0
    for q in range(n):
        out |= ((bits >> (2 * q)) & 1) << q

    return out


def _interleave(z_mask: int, x_mask: int, n: int) -> int:
    bits = 0
    for q in range(n):
        bits |= ((z_mask >> q) & 1) << (2 * q)
        bits |= ((x_mask >> q) & 1) << (2 * q + 1)

    return bits


class PauliIndex:
    __slots__ = ("_n", "_bits")

    def __init__(self, n: int, bits: int = 0) -> None:
        if n < 0:
            raise DimensionMismatch("Qubit count must be non-negative")
        if bits < 0 or bits >> (2 * n):
            raise DimensionMismatch(f"Pauli index has bits beyond {2 * n}")

        self._n = n
        self._bits = bits

    @classmethod
    def from_masks(cls, n: int, z_mask: int, x_mask: int) -> Self:
        return cls(n, _interleave(z_mask, x_mask, n))

    @classmethod
    def from_string(cls, text: str) -> Self:
        """Parse ``I/X/Y/Z`` characters; the leftmost character is qubit 0."""

        z_mask = x_mask = 0
        for q, char in enumerate(text):
            if char not in _PAULI_CHARS:
                raise FormatError(
                    f"Unknown Pauli character {char!r}", line=1, column=q + 1
                )
            z, x = _PAULI_CHARS[char]
            z_mask |= z << q
            x_mask |= x << q

        return cls.from_masks(len(text), z_mask, x_mask)

    @classmethod
    def from_vector(cls, vector: BitVector) -> Self:
        if len(vector) % 2:
            raise DimensionMismatch(
                f"Symplectic vectors have even length, got {len(vector)}"
            )

        return cls(len(vector) // 2, vector.bits)

    @property
    def n(self) -> int:
        return self._n

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def z_mask(self) -> int:
        return _compress_even(self._bits, self._n)

    @property
    def x_mask(self) -> int:
        return _compress_even(self._bits >> 1, self._n)

    def pair(self, q: int) -> tuple[int, int]:
        return (self._bits >> (2 * q)) & 1, (self._bits >> (2 * q + 1)) & 1

    def to_vector(self) -> BitVector:
        return BitVector(2 * self._n, self._bits)

    def to_string(self) -> str:
        return "".join(_PAIR_CHARS[self.pair(q)] for q in range(self._n))

    def __xor__(self, other: "PauliIndex") -> "PauliIndex":
        _check_same_n(self, other)

        return PauliIndex(self._n, self._bits ^ other._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliIndex):
            return NotImplemented

        return self._n == other._n and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._n, self._bits))

    def __repr__(self) -> str:
        return f"PauliIndex({self.to_string()!r})"


class SignedPauli:
    """``sign * sigma~_index`` with sign in {+1, -1}."""

    __slots__ = ("index", "sign")

    def __init__(self, index: PauliIndex, sign: int = 1) -> None:
        if sign not in (1, -1):
            raise PreconditionViolated(f"Sign must be +1 or -1, got {sign}")

        self.index = index
        self.sign = sign

    @classmethod
    def from_string(cls, text: str, sign: int = 1) -> Self:
        return cls(PauliIndex.from_string(text), sign)

    def __mul__(self, other: "SignedPauli") -> "SignedPauli":
        return mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedPauli):
            return NotImplemented

        return self.index == other.index and self.sign == other.sign

    def __hash__(self) -> int:
        return hash((self.index, self.sign))

    def __repr__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.index.to_string()}"


def _check_same_n(p: PauliIndex, q: PauliIndex) -> None:
    if p.n != q.n:
        raise DimensionMismatch(f"Pauli indices on {p.n} and {q.n} qubits")


def y_count(b: PauliIndex) -> int:
    return (b.z_mask & b.x_mask).bit_count()


def pauli_weight(b: PauliIndex) -> int:
    return (b.z_mask | b.x_mask).bit_count()


def quad_form(b1: PauliIndex, b2: PauliIndex) -> int:
    """``b1^T B_sym b2`` mod 2, that is the parity of ``z1 & x2``."""

    _check_same_n(b1, b2)
    even = _even_mask(b1.n)

    return ((b1.bits & even) & ((b2.bits >> 1) & even)).bit_count() & 1


def mul(p: SignedPauli, q: SignedPauli) -> SignedPauli:
    sign = p.sign * q.sign * (-1 if quad_form(p.index, q.index) else 1)

    return SignedPauli(p.index ^ q.index, sign)


def basis_mask(qubit_mask: int, n: int) -> int:
    """Map a per-qubit mask (bit ``q`` = qubit ``q``) onto basis-index bits."""

    out = 0
    for q in range(n):
        if (qubit_mask >> q) & 1:
            out |= 1 << (n - 1 - q)

    return out


def check_dense_limit(n: int, limit: int | None = None) -> None:
    limit = settings.QSWE_DENSE_QUBIT_LIMIT if limit is None else limit
    if n > limit:
        raise LimitExceeded(f"{n} qubits exceed the dense-matrix limit", limit)


def parity_array(values: np.ndarray, mask: int) -> np.ndarray:
    """Elementwise parity of ``values & mask`` for a non-negative integer array."""

    parity = np.zeros_like(values)
    masked = values & mask
    while mask:
        low = mask & -mask
        parity ^= (masked & low) != 0
        mask ^= low

    return parity


def signed_permutation(index: PauliIndex) -> tuple[np.ndarray, np.ndarray]:
    """Column action of ``sigma~_index``.

    Column ``c`` has one entry, at row ``rows[c]``.

    ``sigma~`` factors per qubit as ``X^x Z^z``, so the entry is
    ``(-1)^{popcount(c & z)}`` at row ``c ^ x`` (masks in basis-index bits).
    """

    dim = 1 << index.n
    columns = np.arange(dim, dtype=np.int64)
    rows = columns ^ basis_mask(index.x_mask, index.n)
    signs = 1 - 2 * parity_array(columns, basis_mask(index.z_mask, index.n))

    return rows, signs


def to_matrix(p: SignedPauli, limit: int | None = None) -> np.ndarray:
    check_dense_limit(p.index.n, limit)

    dim = 1 << p.index.n
    rows, signs = signed_permutation(p.index)
    matrix = np.zeros((dim, dim), dtype=np.int64)
    matrix[rows, np.arange(dim)] = p.sign * signs

    return matrix


def even_odd_rows(h: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """Split a ``2n x N`` symplectic matrix into its z rows and x rows."""

    if h.rows % 2:
        raise DimensionMismatch(
            f"Symplectic matrices have an even row count, got {h.rows}"
        )

    return h.select_rows(range(0, h.rows, 2)), h.select_rows(range(1, h.rows, 2))


def symplectic_gram(h: BitMatrix) -> BitMatrix:
    """``H^T B_sym H``; entry ``(i, j)`` is ``quad_form(column i, column j)``."""

    h0, h1 = even_odd_rows(h)

    return h0.transpose() @ h1


def expansion_sign(h: BitMatrix, a: BitVector) -> int:
    """``a^T lwtr(H^T B_sym H) a`` mod 2.

    This is the sign collected when the selected columns of ``H`` are multiplied
    as ``sigma~`` operators with the highest column index leftmost.
    """

    if len(a) != h.cols:
        raise DimensionMismatch(f"Selector has length {len(a)}, H has {h.cols} columns")

    lower = lwtr(symplectic_gram(h))
    total = 0
    for i, row in enumerate(lower.row_ints()):
        if a[i]:
            total ^= (row & a.bits).bit_count() & 1

    return total
