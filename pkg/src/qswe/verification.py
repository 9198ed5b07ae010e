"""Randomized cross-checks between the enumerator and the exact simulator."""

import sys

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from core.config import settings
from core.errors import InternalInvariantError, LimitExceeded, PreconditionViolated
from core.logger_utils import get_logger

from qswe.circuit_model import Circuit, r_map_check
from qswe.enumerator import evaluate
from qswe.exact_sim import circuit_unitary
from qswe.generators import random_circuit
from qswe.gf2_linalg import rank
from qswe.pauli_algebra import check_dense_limit
from qswe.reduction import (
    amplitude_instance,
    canonicalize_p3,
    gate_matrix,
    split_rows,
    trace_instance,
)

logger = get_logger(__name__)


class TrialResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    trial: int
    qubits: int
    gates: int
    rank_deficient: bool = False
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"trial {self.trial} {status}"
        if self.rank_deficient:
            line += " (rank-deficient H0)"
        if self.failures:
            line += ": " + "; ".join(self.failures)

        return line


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int
    trials: list[TrialResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(trial.passed for trial in self.trials)

    @property
    def failed_count(self) -> int:
        return sum(not trial.passed for trial in self.trials)

    def render(self) -> str:
        lines = [trial.render() for trial in self.trials]
        total = len(self.trials)
        lines.append(
            f"summary {total - self.failed_count}/{total} passed (seed {self.seed})"
        )

        return "\n".join(lines)


def run_trial(
    c: Circuit, trial: int = 0, workers: int | None = None, embed_check: bool = True
) -> TrialResult:
    """Check every reduction identity on one conforming circuit.

    Self-check failures inside the reductions are recorded as failures of the trial.
    """

    failures: list[str] = []
    unitary = circuit_unitary(c)
    h0 = split_rows(gate_matrix(c)).H0
    rank_deficient = rank(h0) < c.n

    amplitude = unitary.entry(0, 0)
    try:
        amplitude_value = evaluate(amplitude_instance(c), workers=workers)
        if not amplitude.is_real() or amplitude_value != amplitude.re:
            failures.append(f"amplitude: eval {amplitude_value} != <0|U|0> {amplitude}")
    except (InternalInvariantError, PreconditionViolated) as e:
        failures.append(f"amplitude: {e}")
        amplitude_value = None

    trace = unitary.trace()
    try:
        trace_value = evaluate(trace_instance(c), workers=workers)
        if not trace.is_real() or trace.re % unitary.dim:
            failures.append(
                f"trace: tr U = {trace} is not a real multiple of {unitary.dim}"
            )
        elif trace_value * unitary.dim != trace.re:
            failures.append(
                f"trace: eval {trace_value} * {unitary.dim} != tr U {trace}"
            )
    except (InternalInvariantError, PreconditionViolated) as e:
        failures.append(f"trace: {e}")

    try:
        canonical_value = evaluate(canonicalize_p3(c), workers=workers)
        if amplitude_value is not None and canonical_value != amplitude_value:
            failures.append(
                f"canonical: eval {canonical_value} != amplitude eval {amplitude_value}"
            )
    except (InternalInvariantError, PreconditionViolated) as e:
        failures.append(f"canonical: {e}")

    if embed_check and not r_map_check(c):
        failures.append("embedding: R U(G') != U(G) R")

    result = TrialResult(
        trial=trial,
        qubits=c.n,
        gates=c.size,
        rank_deficient=rank_deficient,
        failures=tuple(failures),
    )
    if not result.passed:
        logger.warning("Trial failed.", trial=trial, failures=list(result.failures))

    return result


def run_verify(
    seed: int,
    qubits: int,
    gates: int,
    trials: int,
    k: int = 4,
    l: int = 3,
    workers: int | None = None,
    progress: bool = False,
) -> VerifyReport:
    """Run ``trials`` seeded trials; identical seeds give identical reports."""

    check_dense_limit(qubits)
    if gates > settings.QSWE_KERNEL_DIMENSION_LIMIT:
        raise LimitExceeded(
            f"{gates} gates give kernels above the enumeration cap",
            settings.QSWE_KERNEL_DIMENSION_LIMIT,
        )
    if qubits < 1 and gates:
        raise PreconditionViolated("Random real gates need at least one qubit")

    embed_check = qubits + 1 <= settings.QSWE_DENSE_QUBIT_LIMIT
    rng = np.random.default_rng(seed)
    results = []
    for trial in tqdm(
        range(1, trials + 1), disable=not progress, file=sys.stderr, desc="Verifying"
    ):
        c = random_circuit(rng, qubits, gates, k=k, l=l)
        results.append(
            run_trial(c, trial=trial, workers=workers, embed_check=embed_check)
        )

    report = VerifyReport(seed=seed, trials=results)
    logger.info("Verification finished.", trials=trials, failed=report.failed_count)

    return report
