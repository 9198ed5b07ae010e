"""Quadratically signed weight enumerators.

``S(A, B, x, y) = sum over b with A b = 0 of (-1)^(b^T B b) x^|b| y^(n - |b|)``
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from core.config import settings
from core.errors import (
    InternalInvariantError,
    LimitExceeded,
    PreconditionViolated,
    PromiseViolated,
)
from core.lib import sign_of
from core.logger_utils import get_logger

from qswe.gf2_linalg import BitMatrix, has_unit_diagonal, kernel_basis, lwtr, vstack

logger = get_logger(__name__)


class QsweInstance(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: BitMatrix
    B: BitMatrix
    x: PositiveInt
    y: PositiveInt

    @model_validator(mode="after")
    def _dimensions(self) -> "QsweInstance":
        n = self.A.cols
        if self.B.shape != (n, n):
            raise ValueError(
                f"B must be {n}x{n} to match the columns of A, "
                f"got {self.B.rows}x{self.B.cols}"
            )

        return self

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def m(self) -> int:
        return self.A.rows


class ShapeTag(str, Enum):
    GENERAL = "GENERAL"
    P3 = "P3"
    P4 = "P4"


def quadratic_form(b_matrix: BitMatrix, bits: int) -> int:
    """``b^T B b`` mod 2 for a packed vector ``b``."""

    total = 0
    for i, row in enumerate(b_matrix.row_ints()):
        if (bits >> i) & 1:
            total ^= (row & bits).bit_count() & 1

    return total


def _symmetrized_action(b_matrix: BitMatrix, bits: int) -> int:
    """``(B + B^T) v`` packed.

    ``b^T (B + B^T) v`` is then a parity of ``b & result``.
    """

    out = 0
    columns = b_matrix.transpose().row_ints()
    for i, (row, column) in enumerate(zip(b_matrix.row_ints(), columns)):
        out |= (((row ^ column) & bits).bit_count() & 1) << i

    return out


@dataclass(frozen=True)
class _Walk:
    """One Gray-code walk over the low ``len(basis)`` kernel coordinates."""

    n: int
    basis: tuple[int, ...]
    forms: tuple[int, ...]
    cross: tuple[int, ...]
    start: int
    start_form: int
    b_matrix: BitMatrix | None = None


def _signed_weight_counts(walk: _Walk) -> list[int]:
    """Signed number of kernel vectors per weight visited by ``walk``.

    Flipping basis vector ``v`` changes the form by ``v^T B v + b^T (B + B^T) v``.
    When ``walk.b_matrix`` is set every step is checked against a fresh evaluation.
    """

    counts = [0] * (walk.n + 1)
    bits, form = walk.start, walk.start_form
    counts[bits.bit_count()] += -1 if form else 1

    basis, forms, cross = walk.basis, walk.forms, walk.cross
    for step in range(1, 1 << len(basis)):
        j = (step & -step).bit_length() - 1
        form ^= forms[j] ^ ((bits & cross[j]).bit_count() & 1)
        bits ^= basis[j]
        if form:
            counts[bits.bit_count()] -= 1
        else:
            counts[bits.bit_count()] += 1

        if walk.b_matrix is not None and form != quadratic_form(walk.b_matrix, bits):
            raise InternalInvariantError(
                f"Incremental form diverged at Gray step {step}"
            )

    return counts


def _plan_walks(
    inst: QsweInstance, basis: list[int], prefix_bits: int, check_steps: bool
) -> list[_Walk]:
    forms = tuple(quadratic_form(inst.B, v) for v in basis)
    cross = tuple(_symmetrized_action(inst.B, v) for v in basis)
    low = len(basis) - prefix_bits

    walks = []
    for prefix in range(1 << prefix_bits):
        start = 0
        for i in range(prefix_bits):
            if (prefix >> i) & 1:
                start ^= basis[low + i]
        walks.append(
            _Walk(
                n=inst.n,
                basis=tuple(basis[:low]),
                forms=forms[:low],
                cross=cross[:low],
                start=start,
                start_form=quadratic_form(inst.B, start),
                b_matrix=inst.B if check_steps else None,
            )
        )

    return walks


def _combine(inst: QsweInstance, counts: list[int]) -> int:
    return sum(
        count * inst.x**w * inst.y ** (inst.n - w)
        for w, count in enumerate(counts)
        if count
    )


def evaluate(
    inst: QsweInstance,
    workers: int | None = None,
    max_kernel_dim: int | None = None,
    check_steps: bool = False,
) -> int:
    """Exact ``S(A, B, x, y)`` by a Gray-code walk over the kernel of ``A``.

    Args:
        inst: The instance.
        workers: Process count; defaults to ``QSWE_THREADS``. The top kernel
            coordinates are fixed per partition, so the result does not depend on it.
        max_kernel_dim: Overrides ``QSWE_KERNEL_DIMENSION_LIMIT``.
        check_steps: Recompute the quadratic form at every Gray step.

    Returns:
        The exact integer value of the sum.
    """

    limit = max_kernel_dim
    if limit is None:
        limit = settings.QSWE_KERNEL_DIMENSION_LIMIT
    workers = settings.QSWE_THREADS if workers is None else workers

    basis = kernel_basis(inst.A)
    d = len(basis)
    if d > limit:
        raise LimitExceeded(f"Kernel dimension {d} is above the enumeration cap", limit)

    prefix_bits = 0 if workers <= 1 else min(d, (workers - 1).bit_length() + 2)
    walks = _plan_walks(inst, basis, prefix_bits, check_steps)
    logger.debug(
        "Enumerating kernel.", kernel_dim=d, workers=workers, partitions=len(walks)
    )

    counts = [0] * (inst.n + 1)
    if workers <= 1 or len(walks) == 1:
        partials = map(_signed_weight_counts, walks)
        for partial in partials:
            counts = [a + b for a, b in zip(counts, partial)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(_signed_weight_counts, walks):
                counts = [a + b for a, b in zip(counts, partial)]

    return _combine(inst, counts)


def evaluate_naive(inst: QsweInstance, max_n: int | None = None) -> int:
    """Reference evaluation testing ``A b = 0`` for every one of the ``2^n`` vectors."""

    limit = settings.QSWE_NAIVE_LIMIT if max_n is None else max_n
    if inst.n > limit:
        raise LimitExceeded(
            f"{inst.n} variables are too many for naive evaluation", limit
        )

    rows = inst.A.row_ints()
    total = 0
    for bits in range(1 << inst.n):
        if any((row & bits).bit_count() & 1 for row in rows):
            continue
        weight = bits.bit_count()
        term = inst.x**weight * inst.y ** (inst.n - weight)
        total += -term if quadratic_form(inst.B, bits) else term

    return total


def promise_holds(value: int, x: int, y: int, n: int) -> bool:
    """``|S| >= (x^2 + y^2)^(n/2) / 2``, compared exactly.

    The test is ``4 S^2 >= (x^2 + y^2)^n``.
    """

    return 4 * value * value >= (x * x + y * y) ** n


def sign_with_promise(inst: QsweInstance, workers: int | None = None) -> int:
    value = evaluate(inst, workers=workers)
    if not promise_holds(value, inst.x, inst.y, inst.n):
        logger.info("Promise violated.", value=value, n=inst.n)
        raise PromiseViolated("|S| < (x^2 + y^2)^(n/2) / 2", value)

    return sign_of(value)


def _split_p4(a: BitMatrix) -> BitMatrix | None:
    n = a.cols
    if a.rows != 2 * n:
        return None

    c = a.select_rows(range(n))
    if a.select_rows(range(n, 2 * n)) != c.transpose():
        return None

    return c


def is_p3(inst: QsweInstance) -> bool:
    a = inst.A

    return a.is_square() and has_unit_diagonal(a) and inst.B == lwtr(a)


def is_p4(inst: QsweInstance) -> bool:
    c = _split_p4(inst.A)

    return c is not None and has_unit_diagonal(c) and inst.B == lwtr(c)


def classify_shape(inst: QsweInstance) -> ShapeTag:
    if is_p3(inst):
        return ShapeTag.P3
    if is_p4(inst):
        return ShapeTag.P4

    return ShapeTag.GENERAL


def p3_instance(a: BitMatrix, x: int, y: int) -> QsweInstance:
    return QsweInstance(A=a, B=lwtr(a), x=x, y=y)


def p4_instance(c: BitMatrix, x: int, y: int) -> QsweInstance:
    return QsweInstance(A=vstack(c, c.transpose()), B=lwtr(c), x=x, y=y)


def p4_block(inst: QsweInstance) -> BitMatrix:
    """The square ``C`` of a ``[C; C^T]`` instance."""

    c = _split_p4(inst.A)
    if c is None:
        raise PreconditionViolated("A is not of the form [C; C^T]")

    return c


def sign_p3(inst: QsweInstance, workers: int | None = None) -> int:
    if not is_p3(inst):
        raise PreconditionViolated("Instance is not (A, lwtr(A)) with diag(A) = I")

    return sign_with_promise(inst, workers=workers)


def sign_p4(inst: QsweInstance, workers: int | None = None) -> int:
    if not is_p4(inst):
        raise PreconditionViolated(
            "Instance is not ([C; C^T], lwtr(C)) with diag(C) = I"
        )

    return sign_with_promise(inst, workers=workers)
