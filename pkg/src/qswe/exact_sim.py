"""Exact simulator over Gaussian integers.

Every matrix is kept unnormalized: a ``ScaledMatrix`` with ``scale = N`` stands for
``entries / (k^2 + l^2)^(N/2)``. No square root or float is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import PreconditionViolated, PromiseViolated
from core.lib import sign_of
from core.logger_utils import get_logger

from qswe.pauli_algebra import check_dense_limit, signed_permutation

if TYPE_CHECKING:
    from qswe.circuit_model import Circuit

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int
    im: int = 0

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __mul__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """``|z|^2``."""

        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"

        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


def identity_object(dim: int) -> np.ndarray:
    matrix = np.zeros((dim, dim), dtype=object)
    np.fill_diagonal(matrix, 1)

    return matrix


def gaussian_matmul(
    a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    a_re, a_im = a
    b_re, b_im = b

    return a_re @ b_re - a_im @ b_im, a_re @ b_im + a_im @ b_re


def scale_text(base: int, scale: int) -> str:
    """Render ``base^(scale/2)``, as an integer power when ``base`` is a square."""

    root = isqrt(base)
    if root * root == base:
        return f"{root}^{scale}"

    return f"{base}^({scale}/2)"


class ScaledMatrix(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    re: np.ndarray
    im: np.ndarray
    scale: int
    base: int

    @property
    def dim(self) -> int:
        return 1 << self.n

    def entry(self, row: int, col: int) -> GaussianInt:
        return GaussianInt(int(self.re[row, col]), int(self.im[row, col]))

    def trace(self) -> GaussianInt:
        return GaussianInt(
            int(sum(np.diagonal(self.re))), int(sum(np.diagonal(self.im)))
        )

    def is_real(self) -> bool:
        return not any(self.im.flat)

    def denominator_squared(self) -> int:
        return self.base**self.scale

    def gram(self) -> tuple[np.ndarray, np.ndarray]:
        """``M^H M`` as ``(re, im)``."""

        return gaussian_matmul((self.re.T, -self.im.T), (self.re, self.im))

    def equals(self, other: ScaledMatrix) -> bool:
        return (
            self.scale == other.scale
            and self.base == other.base
            and np.array_equal(self.re, other.re)
            and np.array_equal(self.im, other.im)
        )


def apply_gate_left(
    re: np.ndarray, im: np.ndarray, c: Circuit, position: int
) -> tuple[np.ndarray, np.ndarray]:
    """Left-multiply ``(re, im)`` by the unnormalized gate.

    The gate is ``k I + phase * l * sigma~``.
    """

    gate = c.gates[position]
    rows, signs = signed_permutation(gate.index)
    # row r of sigma~ M is signs[c] * M[c] where rows[c] == r
    source = np.empty_like(rows)
    source[rows] = np.arange(len(rows))
    weights = (signs[source] * 1).astype(object)[:, None]
    moved_re, moved_im = weights * re[source, :], weights * im[source, :]

    phase_re, phase_im = gate.tilde_phase
    k, l = c.k, c.l
    new_re = k * re + l * (phase_re * moved_re - phase_im * moved_im)
    new_im = k * im + l * (phase_re * moved_im + phase_im * moved_re)

    return new_re, new_im


def circuit_unitary(c: Circuit, limit: int | None = None) -> ScaledMatrix:
    """``(k^2 + l^2)^(N/2) * G_N ... G_1`` as exact Gaussian integers."""

    check_dense_limit(c.n, limit)

    dim = 1 << c.n
    re = identity_object(dim)
    im = np.zeros((dim, dim), dtype=object)
    for position in range(c.size):
        re, im = apply_gate_left(re, im, c, position)

    return ScaledMatrix(n=c.n, re=re, im=im, scale=c.size, base=c.base)


class ExactAmplitude(BaseModel):
    """``value / base^(scale/2)``, optionally divided by ``divisor`` (traces)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: GaussianInt
    scale: int
    base: int
    divisor: int = 1

    def promise_holds(self) -> bool:
        """``|value / (divisor * base^(scale/2))| >= 1/2`` compared exactly."""

        return 4 * self.value.norm() >= self.divisor**2 * self.base**self.scale

    def render(self) -> str:
        denominator = scale_text(self.base, self.scale)
        if self.divisor != 1:
            denominator = f"({self.divisor} * {denominator})"

        return f"{self.value} / {denominator}"


def amplitude00(c: Circuit, limit: int | None = None) -> ExactAmplitude:
    unitary = circuit_unitary(c, limit=limit)

    return ExactAmplitude(
        value=unitary.entry(0, 0), scale=unitary.scale, base=unitary.base
    )


def normalized_trace(c: Circuit, limit: int | None = None) -> ExactAmplitude:
    unitary = circuit_unitary(c, limit=limit)

    return ExactAmplitude(
        value=unitary.trace(),
        scale=unitary.scale,
        base=unitary.base,
        divisor=unitary.dim,
    )


def _solve_sign(result: ExactAmplitude, what: str) -> int:
    if not result.value.is_real():
        raise PreconditionViolated(f"The {what} is not real; embed the circuit first")
    if not result.promise_holds():
        logger.info("Promise violated.", quantity=what, value=str(result.value))
        raise PromiseViolated(f"|{what}| < 1/2", result.value.re)

    return sign_of(result.value.re)


def sign_amplitude(c: Circuit, limit: int | None = None) -> int:
    """Sign of ``<0...0|U|0...0>``.

    Relies on the promise that its magnitude is at least 1/2.
    """

    return _solve_sign(amplitude00(c, limit=limit), "amplitude")


def sign_trace(c: Circuit, limit: int | None = None) -> int:
    """Sign of ``tr U`` under the promise ``|tr U / 2^n| >= 1/2``."""

    return _solve_sign(normalized_trace(c, limit=limit), "normalized trace")


class MachineModel(str, Enum):
    QRAM = "qram"
    Q1RAM = "q1ram"


def prob_first_qubit_one(
    c: Circuit, model: MachineModel, limit: int | None = None
) -> Fraction:
    """Probability of reading 1 on the first qubit (the most significant basis bit).

    QRAM starts from ``|0...0>``; Q1RAM starts from ``|0>`` on the first qubit and a
    uniformly random basic state on the others.
    """

    if c.n < 1:
        raise PreconditionViolated("Measuring the first qubit needs at least one qubit")

    unitary = circuit_unitary(c, limit=limit)
    half = unitary.dim // 2
    norms = unitary.re[half:, :] ** 2 + unitary.im[half:, :] ** 2
    if MachineModel(model) is MachineModel.QRAM:
        weight = int(sum(norms[:, 0]))
        starts = 1
    else:
        weight = int(norms[:, :half].sum())
        starts = half

    return Fraction(weight, starts * unitary.denominator_squared())


def solve_first_qubit(c: Circuit, model: MachineModel, limit: int | None = None) -> int:
    """Sign of ``2p - 1`` under the promise ``|2p - 1| >= 1/2``."""

    bias = 2 * prob_first_qubit_one(c, model, limit=limit) - 1
    if abs(bias) < Fraction(1, 2):
        logger.info("Promise violated.", quantity="2p-1", value=str(bias))
        raise PromiseViolated("|2p - 1| < 1/2", bias)

    return sign_of(bias)
