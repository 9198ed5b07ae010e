"""Dense linear algebra over GF(2).

Rows are packed into Python integers: bit ``j`` of a row integer is the entry in
column ``j``. Vectors use the same packing, bit ``i`` being entry ``i``.
"""

from collections.abc import Iterable, Iterator, Sequence
from typing import Self

from core.errors import DimensionMismatch, InternalInvariantError, PreconditionViolated
from core.logger_utils import get_logger

logger = get_logger(__name__)


def _parity(value: int) -> int:
    return value.bit_count() & 1


def _check_padding(value: int, width: int, what: str) -> None:
    if value < 0 or value >> width:
        raise DimensionMismatch(f"{what} has bits set beyond its width {width}")


class BitVector:
    __slots__ = ("_len", "_bits")

    def __init__(self, length: int, bits: int = 0) -> None:
        if length < 0:
            raise DimensionMismatch("Vector length must be non-negative")
        _check_padding(bits, length, "Vector")
        self._len = length
        self._bits = bits

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> Self:
        bits = 0
        for i, entry in enumerate(entries):
            if entry not in (0, 1):
                raise PreconditionViolated(f"Entry {entry!r} is not a bit")
            bits |= entry << i

        return cls(len(entries), bits)

    @classmethod
    def zeros(cls, length: int) -> Self:
        return cls(length, 0)

    def __len__(self) -> int:
        return self._len

    @property
    def bits(self) -> int:
        return self._bits

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._len:
            raise IndexError(i)

        return (self._bits >> i) & 1

    def weight(self) -> int:
        return self._bits.bit_count()

    def dot(self, other: "BitVector") -> int:
        if self._len != other._len:
            raise DimensionMismatch(
                f"Cannot dot vectors of length {self._len} and {other._len}"
            )

        return _parity(self._bits & other._bits)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self._len != other._len:
            raise DimensionMismatch(
                f"Cannot add vectors of length {self._len} and {other._len}"
            )

        return BitVector(self._len, self._bits ^ other._bits)

    def to_list(self) -> list[int]:
        return [(self._bits >> i) & 1 for i in range(self._len)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented

        return self._len == other._len and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._len, self._bits))

    def __repr__(self) -> str:
        return f"BitVector({''.join(map(str, self.to_list()))!r})"


class BitMatrix:
    """Immutable dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("_rows", "_nrows", "_ncols")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[int] = ()) -> None:
        packed = tuple(rows) if rows else (0,) * nrows
        if nrows < 0 or ncols < 0:
            raise DimensionMismatch("Matrix dimensions must be non-negative")
        if len(packed) != nrows:
            raise DimensionMismatch(f"Expected {nrows} rows, got {len(packed)}")
        for row in packed:
            _check_padding(row, ncols, "Row")

        self._rows = packed
        self._nrows = nrows
        self._ncols = ncols

    @classmethod
    def from_lists(
        cls, entries: Sequence[Sequence[int]], ncols: int | None = None
    ) -> Self:
        if ncols is None:
            ncols = len(entries[0]) if entries else 0

        rows = []
        for row in entries:
            if len(row) != ncols:
                raise DimensionMismatch(
                    f"Ragged row of length {len(row)}, expected {ncols}"
                )
            rows.append(BitVector.from_list(row).bits)

        return cls(len(entries), ncols, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Self:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, size: int) -> Self:
        return cls(size, size, [1 << i for i in range(size)])

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> Self:
        """Build a matrix from column integers (bit ``i`` of a column is row ``i``)."""

        rows = [0] * nrows
        for j, column in enumerate(columns):
            _check_padding(column, nrows, "Column")
            for i in range(nrows):
                if (column >> i) & 1:
                    rows[i] |= 1 << j

        return cls(nrows, len(columns), rows)

    @property
    def rows(self) -> int:
        return self._nrows

    @property
    def cols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self._nrows, self._ncols

    def row_bits(self, i: int) -> int:
        return self._rows[i]

    def row_ints(self) -> tuple[int, ...]:
        return self._rows

    def row(self, i: int) -> BitVector:
        return BitVector(self._ncols, self._rows[i])

    def column_bits(self, j: int) -> int:
        if not 0 <= j < self._ncols:
            raise IndexError(j)

        column = 0
        for i, row in enumerate(self._rows):
            column |= ((row >> j) & 1) << i

        return column

    def column(self, j: int) -> BitVector:
        return BitVector(self._nrows, self.column_bits(j))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self._nrows and 0 <= j < self._ncols):
            raise IndexError((i, j))

        return (self._rows[i] >> j) & 1

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_columns(self._ncols, self._rows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def is_square(self) -> bool:
        return self._nrows == self._ncols

    def select_rows(self, indices: Sequence[int]) -> "BitMatrix":
        return BitMatrix(len(indices), self._ncols, [self._rows[i] for i in indices])

    def select_columns(self, indices: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_columns(
            self._nrows, [self.column_bits(j) for j in indices]
        )

    def apply(self, vector: BitVector) -> BitVector:
        """Matrix-vector product ``self @ vector``."""

        if len(vector) != self._ncols:
            raise DimensionMismatch(
                f"Cannot apply a {self._nrows}x{self._ncols} matrix "
                f"to a vector of length {len(vector)}"
            )

        bits = 0
        for i, row in enumerate(self._rows):
            bits |= _parity(row & vector.bits) << i

        return BitVector(self._nrows, bits)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def to_lists(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self._ncols)] for row in self._rows]

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(
                f"Cannot add {self.shape} and {other.shape} matrices"
            )

        return BitMatrix(
            self._nrows, self._ncols, [a ^ b for a, b in zip(self._rows, other._rows)]
        )

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented

        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._nrows, self._ncols, self._rows))

    def __repr__(self) -> str:
        body = ";".join("".join(map(str, row)) for row in self.to_lists())

        return f"BitMatrix({self._nrows}x{self._ncols}: {body})"


def vstack(top: BitMatrix, bottom: BitMatrix) -> BitMatrix:
    """``[top; bottom]``: place ``top`` above ``bottom``."""

    if top.cols != bottom.cols:
        raise DimensionMismatch(
            f"Cannot stack matrices with {top.cols} and {bottom.cols} columns"
        )

    return BitMatrix(
        top.rows + bottom.rows, top.cols, top.row_ints() + bottom.row_ints()
    )


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(
            f"Cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}"
        )

    b_rows = b.row_ints()
    result = []
    for row in a.row_ints():
        acc = 0
        while row:
            low = row & -row
            acc ^= b_rows[low.bit_length() - 1]
            row ^= low
        result.append(acc)

    return BitMatrix(a.rows, b.cols, result)


def _reduce(rows: list[int], aux: list[int], column_order: Iterable[int]) -> list[int]:
    """Gauss-Jordan elimination in place; ``aux`` receives the same row operations.

    Returns the pivot columns, one per leading row, in the order they were found.
    """

    pivots = []
    rank = 0
    for col in column_order:
        mask = 1 << col
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue

        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        aux[rank], aux[pivot] = aux[pivot], aux[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
                aux[i] ^= aux[rank]

        pivots.append(col)
        rank += 1

    return pivots


def _pivot_columns(a: BitMatrix) -> tuple[list[int], list[int]]:
    rows = list(a.row_ints())
    pivots = _reduce(rows, [0] * len(rows), range(a.cols))

    return rows, pivots


def row_reduce(a: BitMatrix) -> tuple[BitMatrix, BitMatrix, int]:
    """Reduced row-echelon form with the transform that produces it.

    Returns:
        ``(R, U, rank)`` with ``U`` invertible and ``U @ a == R``.
    """

    rows = list(a.row_ints())
    transform = [1 << i for i in range(a.rows)]
    pivots = _reduce(rows, transform, range(a.cols))

    reduced = BitMatrix(a.rows, a.cols, rows)
    return reduced, BitMatrix(a.rows, a.rows, transform), len(pivots)


def rank(a: BitMatrix) -> int:
    return len(_pivot_columns(a)[1])


def inverse(a: BitMatrix) -> BitMatrix:
    if not a.is_square():
        raise DimensionMismatch(f"Cannot invert a non-square {a.rows}x{a.cols} matrix")

    _, transform, r = row_reduce(a)
    if r != a.rows:
        raise PreconditionViolated("Matrix is singular over GF(2)")

    return transform


def kernel_basis(a: BitMatrix) -> list[int]:
    """Basis of ``{v : a v = 0}`` as packed vectors of length ``a.cols``."""

    rows, pivots = _pivot_columns(a)
    pivot_set = set(pivots)
    basis = []
    for free in range(a.cols):
        if free in pivot_set:
            continue

        vector = 1 << free
        for r, pivot in enumerate(pivots):
            if (rows[r] >> free) & 1:
                vector |= 1 << pivot
        basis.append(vector)

    return basis


def nullspace_basis(a: BitMatrix) -> BitMatrix:
    """Matrix whose columns form a basis of the kernel of ``a``."""

    return BitMatrix.from_columns(a.cols, kernel_basis(a))


def _reduce_affine(
    a: BitMatrix, c: BitVector
) -> tuple[list[int], list[int], list[int]] | None:
    """Eliminate ``[a | c]`` choosing pivots from the highest column down.

    With that order every pivot variable depends only on lower-indexed free
    variables, so free-variable assignments enumerate solutions lexicographically.
    """

    if a.rows != len(c):
        raise DimensionMismatch(
            f"Right-hand side has length {len(c)}, expected {a.rows}"
        )

    rows = list(a.row_ints())
    rhs = [(c.bits >> i) & 1 for i in range(a.rows)]
    pivots = _reduce(rows, rhs, range(a.cols - 1, -1, -1))
    if any(rhs[i] for i in range(len(pivots), a.rows)):
        return None

    return rows[: len(pivots)], rhs[: len(pivots)], pivots


def solve_affine(a: BitMatrix, c: BitVector) -> BitVector | None:
    """Lexicographically smallest ``v`` with ``a v = c``, or ``None``.

    Entry 0 is the most significant position.
    """

    reduced = _reduce_affine(a, c)
    if reduced is None:
        return None

    _, rhs, pivots = reduced
    bits = 0
    for value, pivot in zip(rhs, pivots):
        bits |= value << pivot

    return BitVector(a.cols, bits)


def iter_affine_solutions(a: BitMatrix, c: BitVector) -> Iterator[BitVector]:
    """Every solution of ``a v = c`` in lexicographic order."""

    reduced = _reduce_affine(a, c)
    if reduced is None:
        return

    rows, rhs, pivots = reduced
    pivot_set = set(pivots)
    free = [j for j in range(a.cols) if j not in pivot_set]
    for counter in range(1 << len(free)):
        # the lowest free column is the most significant digit of the counter
        free_bits = 0
        for position, column in enumerate(free):
            if (counter >> (len(free) - 1 - position)) & 1:
                free_bits |= 1 << column

        bits = free_bits
        for row, value, pivot in zip(rows, rhs, pivots):
            bits |= (value ^ _parity(row & free_bits)) << pivot
        yield BitVector(a.cols, bits)


def factor_rank(c: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """Rank factorization ``c == X @ Y.T`` with independent columns in ``X`` and ``Y``.

    ``X`` collects the pivot columns of ``c`` and ``Y.T`` the non-zero rows of its
    reduced row-echelon form.
    """

    rows, pivots = _pivot_columns(c)
    r = len(pivots)
    x = c.select_columns(pivots)
    y_t = BitMatrix(r, c.cols, rows[:r])

    return x, y_t.transpose()


def lwtr_diag(a: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """Strictly lower triangular part and diagonal part of a square matrix."""

    if not a.is_square():
        raise DimensionMismatch(
            f"lwtr/diag need a square matrix, got {a.rows}x{a.cols}"
        )

    lower = [row & ((1 << i) - 1) for i, row in enumerate(a.row_ints())]
    diagonal = [row & (1 << i) for i, row in enumerate(a.row_ints())]

    return BitMatrix(a.rows, a.cols, lower), BitMatrix(a.rows, a.cols, diagonal)


def lwtr(a: BitMatrix) -> BitMatrix:
    return lwtr_diag(a)[0]


def has_unit_diagonal(a: BitMatrix) -> bool:
    return a.is_square() and all((row >> i) & 1 for i, row in enumerate(a.row_ints()))


class _Span:
    """Incrementally grown span, kept in echelon form keyed by leading bit."""

    def __init__(self) -> None:
        self._basis: dict[int, int] = {}

    def reduce(self, vector: int) -> int:
        while vector:
            lead = vector.bit_length() - 1
            if lead not in self._basis:
                return vector
            vector ^= self._basis[lead]

        return 0

    def __contains__(self, vector: int) -> bool:
        return self.reduce(vector) == 0

    def add(self, vector: int) -> None:
        reduced = self.reduce(vector)
        if reduced:
            self._basis[reduced.bit_length() - 1] = reduced


def full_rank_replacement(h0: BitMatrix, h1: BitMatrix) -> BitMatrix:
    """Replace the first ``n`` columns of ``h0`` so it gets full row rank.

    The result ``H2`` keeps ``lwtr(H2.T @ h1) == lwtr(h0.T @ h1)`` and
    ``diag(H2.T @ h1) == I``. Column ``c'_k`` is built from the last one down: it
    must agree with ``c_k`` on ``d_i`` for every ``i <= k`` and it is the
    lexicographically smallest such vector outside the span of the columns
    already chosen.
    """

    if h0.shape != h1.shape:
        raise DimensionMismatch(
            f"H0 is {h0.rows}x{h0.cols} but H1 is {h1.rows}x{h1.cols}"
        )

    n, big_n = h0.shape
    if big_n < n:
        raise PreconditionViolated(
            f"Need at least as many columns as rows, got {n}x{big_n}"
        )

    gram = h0.transpose() @ h1
    if not has_unit_diagonal(gram):
        raise PreconditionViolated("diag(H0^T H1) must be the identity")

    if rank(h0) == n:
        replaced = h0
    else:
        c_cols = [h0.column_bits(j) for j in range(big_n)]
        d_cols = [h1.column_bits(j) for j in range(n)]
        chosen: dict[int, int] = {}
        span = _Span()
        for k in range(n - 1, -1, -1):
            constraints = BitMatrix(k + 1, n, d_cols[: k + 1])
            target = BitVector(
                k + 1, sum(_parity(d_cols[i] & c_cols[k]) << i for i in range(k + 1))
            )
            solutions = iter_affine_solutions(constraints, target)
            candidate = next(
                (v.bits for v in solutions if v.bits not in span), None
            )
            if candidate is None:
                raise InternalInvariantError(
                    f"Full-rank replacement found no admissible column {k}"
                )

            chosen[k] = candidate
            span.add(candidate)

        logger.debug("Replaced rank-deficient columns.", n=n, columns=big_n)
        replaced = BitMatrix.from_columns(
            n, [chosen.get(j, c_cols[j]) for j in range(big_n)]
        )

    new_gram = replaced.transpose() @ h1
    if rank(replaced) != n:
        raise InternalInvariantError(
            "Full-rank replacement produced a rank-deficient matrix"
        )
    if lwtr(new_gram) != lwtr(gram) or not has_unit_diagonal(new_gram):
        raise InternalInvariantError(
            "Full-rank replacement changed lwtr or diag of H^T H1"
        )

    return replaced
