from pathlib import Path

import numpy as np
import pytest

from core.config import settings
from qswe.circuit_model import Circuit, Gate
from qswe.gf2_linalg import BitMatrix


def brute_force_sum(a: BitMatrix, b: BitMatrix, x: int, y: int) -> int:
    """Independent reference: entries read through ``to_lists``, no bit tricks."""

    a_rows, b_rows = a.to_lists(), b.to_lists()
    n = a.cols
    total = 0
    for value in range(1 << n):
        vector = [(value >> i) & 1 for i in range(n)]
        if any(sum(r[j] * vector[j] for j in range(n)) % 2 for r in a_rows):
            continue
        pairs = ((i, j) for i in range(n) for j in range(n))
        form = sum(vector[i] * b_rows[i][j] * vector[j] for i, j in pairs) % 2
        weight = sum(vector)
        total += (-1) ** form * x**weight * y ** (n - weight)

    return total


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1729)


@pytest.fixture
def y_circuit() -> Circuit:
    return Circuit.from_strings(["Y"], k=4, l=3)


@pytest.fixture
def yy_circuit() -> Circuit:
    return Circuit.from_strings(["Y", "Y"], k=4, l=3)


@pytest.fixture
def flipped_y_circuit() -> Circuit:
    return Circuit(n=1, gates=(Gate.from_string("Y", epsilon=1),), k=4, l=3)


@pytest.fixture
def write_file(tmp_path: Path):
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")

        return path

    return _write


@pytest.fixture(autouse=True)
def default_limits(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings, "QSWE_THREADS", 1)
    monkeypatch.setattr(settings, "QSWE_DENSE_QUBIT_LIMIT", 12)
    monkeypatch.setattr(settings, "QSWE_KERNEL_DIMENSION_LIMIT", 28)
    monkeypatch.setattr(settings, "QSWE_NAIVE_LIMIT", 20)


@pytest.fixture
def brute_force():
    return brute_force_sum
