import pytest
from pydantic import ValidationError

from core.errors import LimitExceeded, PreconditionViolated
from qswe.circuit_model import (
    Circuit,
    CircuitTag,
    Gate,
    conforming_epsilon,
    embed_real,
    r_map_check,
    validate_real,
)
from qswe.generators import random_mixed_circuit


@pytest.mark.parametrize("y, expected", [(1, -1), (3, 1), (5, -1), (0, -1), (2, -1)])
def test_conforming_epsilon(y, expected):
    assert conforming_epsilon(y) == expected


def test_gate_defaults_to_conforming_orientation():
    assert Gate.from_string("Y").epsilon == -1
    assert Gate.from_string("YYY").epsilon == 1
    assert Gate.from_string("X").epsilon == -1


def test_tilde_phase():
    # conforming real gates are k + l sigma~
    assert Gate.from_string("Y").tilde_phase == (1, 0)
    assert Gate.from_string("YYY").tilde_phase == (1, 0)
    assert Gate.from_string("Y", epsilon=1).tilde_phase == (-1, 0)
    # complex gate Z with epsilon -1 is k - i l Z
    assert Gate.from_string("Z").tilde_phase == (0, -1)


def test_tilde_sign_needs_real_gate():
    assert Gate.from_string("Y", epsilon=1).tilde_sign == -1
    with pytest.raises(PreconditionViolated):
        Gate.from_string("X").tilde_sign


def test_circuit_rejects_mixed_widths():
    with pytest.raises(ValidationError):
        Circuit(n=2, gates=(Gate.from_string("Y"),))


def test_circuit_rejects_non_positive_rotation():
    with pytest.raises(ValidationError):
        Circuit(n=1, k=0, l=3)


def test_validate_real_examples():
    assert validate_real(Circuit.from_strings(["Y"])).tag is CircuitTag.REAL_CONFORMING
    assert validate_real(Circuit.from_strings(["X"])).tag is CircuitTag.COMPLEX

    flipped = Circuit(n=3, gates=(Gate.from_string("YYY", epsilon=-1),))
    report = validate_real(flipped)

    assert report.tag is CircuitTag.REAL_NONCONFORMING
    assert report.gates[0].real
    assert not report.gates[0].conforming
    assert report.render().splitlines() == [
        "circuit REAL_NONCONFORMING",
        "gate 1 YYY nonconforming",
    ]


def test_embed_real_examples():
    embedded = embed_real(Circuit.from_strings(["X"]))

    assert embedded.n == 2
    assert embedded.gates[0].index.to_string() == "YX"
    assert embedded.gates[0].epsilon == -1
    assert validate_real(embedded).tag is CircuitTag.REAL_CONFORMING

    flipped = embed_real(Circuit(n=1, gates=(Gate.from_string("X", epsilon=1),)))
    assert flipped.gates[0].epsilon == 1
    assert validate_real(flipped).tag is CircuitTag.REAL_NONCONFORMING

    empty = embed_real(Circuit(n=2))
    assert empty.n == 3
    assert empty.size == 0


def test_embed_real_shifts_real_gates():
    embedded = embed_real(Circuit.from_strings(["YZ", "XX"]))

    assert [g.index.to_string() for g in embedded.gates] == ["IYZ", "YXX"]
    assert all(g.is_real for g in embedded.gates)


@pytest.mark.parametrize(
    "circuit",
    [
        Circuit(n=1),
        Circuit.from_strings(["X"]),
        Circuit.from_strings(["Y"]),
        Circuit.from_strings(["Z", "X", "Y"], k=2, l=1),
    ],
)
def test_r_map_check_examples(circuit):
    assert r_map_check(circuit)


def test_r_map_check_random_mixed(rng):
    for k, l in [(4, 3), (2, 1)]:
        for _ in range(50):
            c = random_mixed_circuit(
                rng, int(rng.integers(1, 4)), int(rng.integers(0, 7)), k=k, l=l
            )
            embedded = embed_real(c)

            assert embedded.size == c.size
            assert embedded.n == c.n + 1
            assert all(g.is_real for g in embedded.gates)
            assert r_map_check(c)


def test_r_map_check_limit():
    with pytest.raises(LimitExceeded):
        r_map_check(Circuit.from_strings(["XX"]), limit=2)
