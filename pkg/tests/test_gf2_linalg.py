import pytest

from core.errors import DimensionMismatch, PreconditionViolated
from qswe.gf2_linalg import (
    BitMatrix,
    BitVector,
    factor_rank,
    full_rank_replacement,
    has_unit_diagonal,
    inverse,
    iter_affine_solutions,
    kernel_basis,
    lwtr,
    lwtr_diag,
    mat_mul,
    nullspace_basis,
    rank,
    row_reduce,
    solve_affine,
    vstack,
)
from qswe.generators import random_circuit, random_matrix
from qswe.reduction import gate_matrix, split_rows


def m(*rows: str) -> BitMatrix:
    return BitMatrix.from_lists([[int(ch) for ch in row] for row in rows])


def v(bits: str) -> BitVector:
    return BitVector.from_list([int(ch) for ch in bits])


def lex_order(length: int):
    """All vectors of ``length`` bits, entry 0 most significant."""

    for value in range(1 << length):
        yield BitVector.from_list(
            [(value >> (length - 1 - i)) & 1 for i in range(length)]
        )


def test_padding_bits_are_rejected():
    with pytest.raises(DimensionMismatch):
        BitMatrix(1, 2, [0b100])
    with pytest.raises(DimensionMismatch):
        BitVector(2, 0b111)


def test_entry_and_transpose():
    a = m("110", "001")

    assert a.entry(0, 1) == 1
    assert a.entry(1, 1) == 0
    assert a.transpose() == m("10", "10", "01")
    assert a.T.T == a


@pytest.mark.parametrize(
    "left, right, expected",
    [
        (m("10", "01"), m("11", "01"), m("11", "01")),
        (m("11"), m("1", "1"), m("0")),
        (m("10", "11"), m("11", "01"), m("11", "10")),
    ],
)
def test_mat_mul_examples(left, right, expected):
    assert mat_mul(left, right) == expected
    assert left @ right == expected


def test_mat_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_mul(m("11"), m("11"))


def test_row_reduce_examples():
    reduced, transform, r = row_reduce(BitMatrix.identity(3))
    assert reduced == BitMatrix.identity(3)
    assert r == 3

    assert row_reduce(m("11", "11"))[2] == 1

    reduced, transform, r = row_reduce(m("01", "10"))
    assert reduced == BitMatrix.identity(2)
    assert transform == m("01", "10")
    assert r == 2


def test_row_reduce_random(rng):
    for _ in range(50):
        a = random_matrix(rng, int(rng.integers(0, 7)), int(rng.integers(0, 7)))
        reduced, transform, r = row_reduce(a)

        assert transform @ a == reduced
        assert rank(transform) == a.rows
        assert all(row == 0 for row in reduced.row_ints()[r:])
        assert all(row != 0 for row in reduced.row_ints()[:r])


def test_inverse():
    a = m("11", "01")
    assert a @ inverse(a) == BitMatrix.identity(2)

    with pytest.raises(PreconditionViolated):
        inverse(m("11", "11"))
    with pytest.raises(DimensionMismatch):
        inverse(m("11"))


def test_nullspace_examples():
    assert kernel_basis(m("11")) == [0b11]
    assert nullspace_basis(BitMatrix.identity(2)).cols == 0
    assert nullspace_basis(BitMatrix.zeros(2, 2)).cols == 2


def test_nullspace_random(rng):
    for _ in range(50):
        a = random_matrix(rng, int(rng.integers(0, 8)), int(rng.integers(0, 8)))
        basis = nullspace_basis(a)

        assert basis.cols == a.cols - rank(a)
        assert (a @ basis).is_zero()
        assert rank(basis) == basis.cols


def test_solve_affine_examples():
    assert solve_affine(BitMatrix.identity(2), v("10")) == v("10")
    assert solve_affine(m("11"), v("1")) == v("01")
    assert solve_affine(m("11", "11"), v("10")) is None


def test_solve_affine_matches_brute_force(rng):
    for _ in range(40):
        rows, cols = int(rng.integers(0, 5)), int(rng.integers(0, 7))
        a = random_matrix(rng, rows, cols)
        c = BitVector.from_list([int(bit) for bit in rng.integers(0, 2, size=rows)])

        expected = [w for w in lex_order(cols) if a.apply(w) == c]

        assert list(iter_affine_solutions(a, c)) == expected
        assert solve_affine(a, c) == (expected[0] if expected else None)


def test_factor_rank_examples():
    x, y = factor_rank(BitMatrix.identity(2))
    assert x == BitMatrix.identity(2)
    assert y == BitMatrix.identity(2)

    x, y = factor_rank(m("11", "11"))
    assert x == m("1", "1")
    assert y == m("1", "1")

    x, y = factor_rank(BitMatrix.zeros(2, 2))
    assert x.shape == (2, 0)
    assert y.shape == (2, 0)


@pytest.mark.slow
def test_factor_rank_random(rng):
    for _ in range(200):
        c = random_matrix(rng, int(rng.integers(0, 13)), int(rng.integers(0, 13)))
        x, y = factor_rank(c)
        r = rank(c)

        assert x @ y.transpose() == c
        assert x.cols == y.cols == r
        assert rank(x) == rank(y) == r


def test_lwtr_diag_examples():
    assert lwtr_diag(m("11", "11")) == (m("00", "10"), BitMatrix.identity(2))
    identity = BitMatrix.identity(3)
    assert lwtr_diag(identity) == (BitMatrix.zeros(3, 3), identity)
    assert lwtr_diag(m("01", "00")) == (BitMatrix.zeros(2, 2), BitMatrix.zeros(2, 2))

    with pytest.raises(DimensionMismatch):
        lwtr(m("11"))


def test_vstack():
    assert vstack(m("10"), m("01")) == BitMatrix.identity(2)
    with pytest.raises(DimensionMismatch):
        vstack(m("1"), m("11"))


def test_full_rank_replacement_examples():
    h0 = BitMatrix.identity(2)
    h1 = m("10", "11")
    assert full_rank_replacement(h0, h1) == h0

    assert full_rank_replacement(m("11", "11"), BitMatrix.identity(2)) == m("11", "01")

    with pytest.raises(PreconditionViolated):
        full_rank_replacement(m("10", "10"), BitMatrix.identity(2))


def test_full_rank_replacement_needs_wide_input():
    with pytest.raises(PreconditionViolated):
        full_rank_replacement(m("1", "0"), m("1", "0"))
    with pytest.raises(DimensionMismatch):
        full_rank_replacement(m("11"), m("1"))


def _check_replacement(h0: BitMatrix, h1: BitMatrix) -> BitMatrix:
    n = h0.rows
    h2 = full_rank_replacement(h0, h1)

    assert h2.shape == h0.shape
    assert rank(h2) == n
    assert lwtr(h2.T @ h1) == lwtr(h0.T @ h1)
    assert has_unit_diagonal(h2.T @ h1)
    # only the first n columns may change
    assert h2.select_columns(range(n, h0.cols)) == h0.select_columns(range(n, h0.cols))
    # H2^T H1 a = 0 has the same solutions as H1 a = 0
    a_prime = h2.T @ h1
    assert rank(a_prime) == rank(h1) == rank(vstack(a_prime, h1))

    return h2


def test_full_rank_replacement_rank_deficient(brute_force):
    # gates YZ, ZY, YZ: every z-part is (1, 1), so H0 has rank one
    h0 = m("111", "111")
    h1 = m("101", "010")

    h2 = _check_replacement(h0, h1)
    a_prime = h2.T @ h1

    assert h2 == m("111", "011")
    form = lwtr(a_prime)
    assert brute_force(a_prime, form, 3, 4) == brute_force(h1, form, 3, 4)


@pytest.mark.slow
def test_full_rank_replacement_random(rng):
    for _ in range(200):
        n = int(rng.integers(1, 9))
        size = int(rng.integers(n, 13))
        rows = split_rows(gate_matrix(random_circuit(rng, n, size)))
        _check_replacement(rows.H0, rows.H1)


def test_full_rank_replacement_repeated_z_parts(rng):
    for _ in range(30):
        n = int(rng.integers(2, 6))
        size = int(rng.integers(n, 9))
        z = int(rng.integers(1, 1 << n))
        xs = []
        while len(xs) < size:
            x = int(rng.integers(0, 1 << n))
            if (x & z).bit_count() % 2:
                xs.append(x)

        h0 = BitMatrix.from_columns(n, [z] * size)
        assert rank(h0) == 1
        _check_replacement(h0, BitMatrix.from_columns(n, xs))


def test_vector_weight_and_dot():
    a, b = v("1101"), v("0111")

    assert a.weight() == 3
    assert a.dot(b) == 0
    assert a.dot(v("0100")) == 1
    assert (a ^ b) == v("1010")

    with pytest.raises(DimensionMismatch):
        a.dot(v("11"))
    with pytest.raises(PreconditionViolated):
        BitVector.from_list([0, 2])
