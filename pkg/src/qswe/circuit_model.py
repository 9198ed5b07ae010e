from enum import Enum
from typing import Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    PositiveInt,
    field_validator,
    model_validator,
)

from core.errors import PreconditionViolated
from core.logger_utils import get_logger

from qswe import exact_sim
from qswe.pauli_algebra import PauliIndex, check_dense_limit, y_count

logger = get_logger(__name__)

Orientation = Literal[1, -1]


def conforming_epsilon(y: int) -> Orientation:
    """Orientation that makes a gate with ``y`` Y factors equal ``k + l sigma~``.

    Complex gates (even ``y``) default to -1.
    """

    return 1 if y % 4 == 3 else -1


class Gate(BaseModel):
    """``(k + epsilon * i * l * sigma_index) / sqrt(k^2 + l^2)``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: PauliIndex
    epsilon: Orientation

    @classmethod
    def from_string(cls, paulis: str, epsilon: Orientation | None = None) -> "Gate":
        index = PauliIndex.from_string(paulis)
        if epsilon is None:
            epsilon = conforming_epsilon(y_count(index))

        return cls(index=index, epsilon=epsilon)

    @property
    def y_count(self) -> int:
        return y_count(self.index)

    @property
    def is_real(self) -> bool:
        return self.y_count % 2 == 1

    @property
    def is_conforming(self) -> bool:
        return self.is_real and self.epsilon == conforming_epsilon(self.y_count)

    @property
    def tilde_sign(self) -> int:
        """``s`` with ``gate = k + s * l * sigma~`` (real gates only)."""

        if not self.is_real:
            raise PreconditionViolated(
                "Only real gates are a real combination of I and sigma~"
            )

        return 1 if self.is_conforming else -1

    @property
    def tilde_phase(self) -> tuple[int, int]:
        """Unit ``epsilon * i^(y+1)`` as ``(re, im)``.

        The gate is ``k + phase * l * sigma~``.
        """

        units = ((1, 0), (0, 1), (-1, 0), (0, -1))
        re, im = units[(self.y_count + 1) % 4]

        return self.epsilon * re, self.epsilon * im


class Circuit(BaseModel):
    """Gates ``G_1 ... G_N`` (``G_1`` applied first) sharing one rotation ``(k, l)``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    gates: tuple[Gate, ...] = ()
    k: PositiveInt = 4
    l: PositiveInt = 3

    @field_validator("n")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("qubit count must be non-negative")

        return value

    @model_validator(mode="after")
    def _same_width(self) -> "Circuit":
        for position, gate in enumerate(self.gates, start=1):
            if gate.index.n != self.n:
                raise ValueError(
                    f"gate {position} acts on {gate.index.n} qubits, "
                    f"circuit has {self.n}"
                )

        return self

    @classmethod
    def from_strings(
        cls, paulis: list[str], k: int = 4, l: int = 3, n: int | None = None
    ) -> "Circuit":
        gates = tuple(Gate.from_string(p) for p in paulis)
        if n is None:
            n = gates[0].index.n if gates else 0

        return cls(n=n, gates=gates, k=k, l=l)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def base(self) -> int:
        return self.k**2 + self.l**2


class CircuitTag(str, Enum):
    REAL_CONFORMING = "REAL_CONFORMING"
    REAL_NONCONFORMING = "REAL_NONCONFORMING"
    COMPLEX = "COMPLEX"


class GateReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: int
    paulis: str
    real: bool
    conforming: bool


class CircuitReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: CircuitTag
    gates: tuple[GateReport, ...]

    def render(self) -> str:
        lines = [f"circuit {self.tag.value}"]
        for gate in self.gates:
            if not gate.real:
                kind = "complex"
            else:
                kind = "conforming" if gate.conforming else "nonconforming"
            lines.append(f"gate {gate.position} {gate.paulis or '-'} {kind}")

        return "\n".join(lines)


def validate_real(c: Circuit) -> CircuitReport:
    reports = tuple(
        GateReport(
            position=i,
            paulis=g.index.to_string(),
            real=g.is_real,
            conforming=g.is_conforming,
        )
        for i, g in enumerate(c.gates, start=1)
    )
    if not all(r.real for r in reports):
        tag = CircuitTag.COMPLEX
    elif all(r.conforming for r in reports):
        tag = CircuitTag.REAL_CONFORMING
    else:
        tag = CircuitTag.REAL_NONCONFORMING

    return CircuitReport(tag=tag, gates=reports)


def embed_real(c: Circuit) -> Circuit:
    """Add a phase qubit 0 so that every gate becomes real.

    Gates with an even number of Y factors gain a Y on qubit 0 and keep their
    orientation; real gates only shift to the right by one qubit.
    """

    gates = []
    for gate in c.gates:
        phase_pair = 0b00 if gate.is_real else 0b11
        index = PauliIndex(c.n + 1, (gate.index.bits << 2) | phase_pair)
        gates.append(Gate(index=index, epsilon=gate.epsilon))

    return Circuit(n=c.n + 1, gates=tuple(gates), k=c.k, l=c.l)


def phase_map(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``R: (alpha|0> + beta|1>)|b> -> (alpha - i beta)|b>`` as ``(re, im)``.

    The matrix is ``2^n x 2^(n+1)``. Qubit 0 is the phase qubit, so ``|0>|b>`` is
    column ``b`` and ``|1>|b>`` is column ``2^n + b``.
    """

    dim = 1 << n
    re = np.zeros((dim, 2 * dim), dtype=object)
    im = np.zeros((dim, 2 * dim), dtype=object)
    for b in range(dim):
        re[b, b] = 1
        im[b, dim + b] = -1

    return re, im


def r_map_check(c: Circuit, limit: int | None = None) -> bool:
    """Check ``R U(G') == U(G) R`` exactly and that ``U(G')`` is real."""

    check_dense_limit(c.n + 1, limit)

    embedded = exact_sim.circuit_unitary(embed_real(c), limit=limit)
    original = exact_sim.circuit_unitary(c, limit=limit)
    r_re, r_im = phase_map(c.n)

    left = exact_sim.gaussian_matmul((r_re, r_im), (embedded.re, embedded.im))
    right = exact_sim.gaussian_matmul((original.re, original.im), (r_re, r_im))
    same = all(np.array_equal(a, b) for a, b in zip(left, right))
    holds = embedded.is_real() and same
    if not holds:
        logger.warning("Phase-qubit embedding check failed.", qubits=c.n, gates=c.size)

    return holds
