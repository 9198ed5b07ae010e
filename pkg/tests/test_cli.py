import pytest

from qswe.cli import ExitStatus, main
from qswe.formats import loads_circuit, loads_instance
from qswe.gf2_linalg import BitMatrix
from qswe.verification import TrialResult, VerifyReport

Y_CIRCUIT = "qswe-circuit v1\nqubits 1\nk 4 l 3\ngate Y -\n"
YY_CIRCUIT = "qswe-circuit v1\nqubits 1\nk 4 l 3\ngate Y -\ngate Y -\n"
EMPTY_CIRCUIT = "qswe-circuit v1\nqubits 1\nk 4 l 3\n"
ONE_BY_ONE = "qswe v1\nn 1 m 1\nx 4 y 3\nA\n1\nB\n0\n"
IDENTITY_2 = "qswe v1\nn 2 m 2\nx 4 y 3\nA\n10\n01\nB\n00\n00\n"


def m(*rows: str) -> BitMatrix:
    return BitMatrix.from_lists([[int(c) for c in row] for row in rows])


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()

    return code, captured.out, captured.err


def test_eval_examples(capsys, write_file):
    path = str(write_file("one.txt", ONE_BY_ONE))

    assert run(capsys, "eval", path)[:2] == (ExitStatus.SUCCESS, "3\n")
    assert run(capsys, "eval", path, "--naive")[:2] == (ExitStatus.SUCCESS, "3\n")
    assert run(capsys, "eval", path, "--sign")[:2] == (ExitStatus.SUCCESS, "+\n")


def test_eval_promise_violation(capsys, write_file):
    path = str(write_file("identity.txt", IDENTITY_2))

    code, out, err = run(capsys, "eval", path, "--sign")

    assert code == ExitStatus.PROMISE_VIOLATED
    assert out == ""
    assert "promise" in err


def test_eval_reports_parse_position(capsys, write_file):
    path = str(write_file("bad.txt", "qswe v1\nn 1 m 1\nx 4 y 3\nA\n2\nB\n0\n"))

    code, out, err = run(capsys, "eval", path)

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "line 5, column 1" in err


def test_eval_kernel_limit(capsys, write_file):
    text = IDENTITY_2.replace("A\n10\n01\n", "A\n").replace("m 2", "m 0")
    path = str(write_file("identity.txt", text))

    code, _, err = run(capsys, "eval", path, "--max-kernel-dim", "1")

    assert code == ExitStatus.USAGE
    assert "limit 1" in err


def test_reduce_amplitude(capsys, write_file):
    code, out, _ = run(capsys, "reduce", str(write_file("y.txt", Y_CIRCUIT)))

    assert code == ExitStatus.SUCCESS
    assert "# scale 1 k 4 l 3" in out.splitlines()
    inst = loads_instance(out)
    assert (inst.A, inst.B, inst.x, inst.y) == (m("1"), m("0"), 3, 4)


def test_reduce_trace(capsys, write_file):
    code, out, _ = run(
        capsys, "reduce", str(write_file("yy.txt", YY_CIRCUIT)), "--target", "trace"
    )

    assert code == ExitStatus.SUCCESS
    inst = loads_instance(out)
    assert inst.A == m("11", "11")
    assert inst.B == m("00", "10")


def test_reduce_then_eval(capsys, write_file, tmp_path):
    code, out, _ = run(capsys, "reduce", str(write_file("yy.txt", YY_CIRCUIT)))
    assert code == ExitStatus.SUCCESS

    reduced = tmp_path / "reduced.txt"
    reduced.write_text(out, encoding="utf-8")
    assert run(capsys, "eval", str(reduced))[:2] == (ExitStatus.SUCCESS, "7\n")


def test_reduce_empty_circuit(capsys, write_file, tmp_path):
    code, out, _ = run(capsys, "reduce", str(write_file("empty.txt", EMPTY_CIRCUIT)))

    assert code == ExitStatus.SUCCESS
    assert loads_instance(out).n == 0

    reduced = tmp_path / "reduced.txt"
    reduced.write_text(out, encoding="utf-8")
    assert run(capsys, "eval", str(reduced))[:2] == (ExitStatus.SUCCESS, "1\n")


def test_reduce_complex_gate_hints_embedding(capsys, write_file):
    path = str(write_file("x.txt", "qswe-circuit v1\nqubits 1\nk 4 l 3\ngate X -\n"))

    code, out, err = run(capsys, "reduce", path)

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "embed-real" in err


def test_reduce_canonical(capsys, write_file):
    code, out, _ = run(
        capsys, "reduce", str(write_file("yy.txt", YY_CIRCUIT)), "--canonical"
    )

    assert code == ExitStatus.SUCCESS
    inst = loads_instance(out)
    assert inst.A.is_square()
    assert inst.B == m("00", "10")


def test_circuit_from_p3(capsys, write_file):
    path = str(write_file("p3.txt", "qswe v1\nn 1 m 1\nx 3 y 4\nA\n1\nB\n0\n"))

    code, out, _ = run(capsys, "circuit", path, "--from", "p3")

    assert code == ExitStatus.SUCCESS
    c = loads_circuit(out)
    assert [g.index.to_string() for g in c.gates] == ["Y"]
    assert (c.k, c.l) == (4, 3)


def test_circuit_from_p4(capsys, write_file):
    text = "qswe v1\nn 2 m 4\nx 3 y 4\nA\n10\n01\n10\n01\nB\n00\n00\n"

    code, out, _ = run(
        capsys, "circuit", str(write_file("p4.txt", text)), "--from", "p4"
    )

    assert code == ExitStatus.SUCCESS
    assert [g.index.to_string() for g in loads_circuit(out).gates] == ["YI", "IY"]


def test_circuit_from_bare_matrix(capsys, write_file):
    path = str(write_file("c.txt", "gf2-matrix v1\nrows 1 cols 1\n1\n"))

    code, out, _ = run(capsys, "circuit", path, "--from", "p3", "--kl", "2,1")

    assert code == ExitStatus.SUCCESS
    c = loads_circuit(out)
    assert (c.k, c.l) == (2, 1)


def test_circuit_rejects_general_instance(capsys, write_file):
    path = str(
        write_file("general.txt", "qswe v1\nn 2 m 1\nx 3 y 4\nA\n11\nB\n00\n00\n")
    )

    code, out, err = run(capsys, "circuit", path, "--from", "p3")

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "GENERAL" in err


def test_sim_examples(capsys, write_file):
    path = str(write_file("y.txt", Y_CIRCUIT))

    amplitude = run(capsys, "sim", path, "--what", "amplitude")
    prob = run(capsys, "sim", path, "--what", "prob", "--model", "qram")
    sign = run(capsys, "sim", path, "--what", "amplitude", "--sign")

    assert amplitude[:2] == (ExitStatus.SUCCESS, "4 / 5^1\n")
    assert prob[:2] == (ExitStatus.SUCCESS, "9/25\n")
    assert sign[:2] == (ExitStatus.SUCCESS, "+\n")


def test_sim_path_sum(capsys, write_file):
    code, out, _ = run(
        capsys, "sim", str(write_file("y.txt", Y_CIRCUIT)), "--what", "pathsum"
    )

    assert code == ExitStatus.SUCCESS
    assert out.splitlines()[0] == "# scale 1 base 25"
    assert len(out.splitlines()) == 3


def test_sim_dense_limit(capsys, write_file):
    text = f"qswe-circuit v1\nqubits 13\nk 4 l 3\ngate {'Y' + 'I' * 12} -\n"
    path = str(write_file("wide.txt", text))

    code, _, err = run(capsys, "sim", path)

    assert code == ExitStatus.USAGE
    assert "limit 12" in err


def test_embed_real(capsys, write_file):
    path = str(write_file("x.txt", "qswe-circuit v1\nqubits 1\nk 4 l 3\ngate X\n"))

    code, out, _ = run(capsys, "embed-real", path)

    assert code == ExitStatus.SUCCESS
    assert out.splitlines()[1:] == ["qubits 2", "k 4 l 3", "gate YX -"]


@pytest.mark.slow
def test_verify_passes(capsys):
    argv = ["verify", "--seed", "0", "--qubits", "3", "--gates", "8", "--trials", "25"]
    code, out, _ = run(capsys, *argv)

    assert code == ExitStatus.SUCCESS
    lines = out.splitlines()
    assert len(lines) == 26
    assert all(" PASS" in line for line in lines[:-1])
    assert lines[-1] == "summary 25/25 passed (seed 0)"


def test_verify_small_run(capsys):
    argv = ["verify", "--seed", "3", "--qubits", "2", "--gates", "4", "--trials", "3"]
    code, out, _ = run(capsys, *argv)

    assert code == ExitStatus.SUCCESS
    assert out.splitlines()[-1] == "summary 3/3 passed (seed 3)"


def test_verify_limits(capsys):
    assert run(capsys, "verify", "--qubits", "13")[0] == ExitStatus.USAGE
    assert run(capsys, "verify", "--gates", "29")[0] == ExitStatus.USAGE


def test_verify_empty_report(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "0")

    assert code == ExitStatus.SUCCESS
    assert out == "summary 0/0 passed (seed 0)\n"


def test_verify_failure_is_internal_error(capsys, mocker):
    failed = VerifyReport(
        seed=5,
        trials=[
            TrialResult(trial=1, qubits=2, gates=3, failures=("amplitude: mismatch",))
        ],
    )
    run_verify = mocker.patch("qswe.cli.run_verify", return_value=failed)

    argv = ["verify", "--seed", "5", "--qubits", "2", "--gates", "3", "--trials", "1"]
    code, out, err = run(capsys, *argv)

    assert code == ExitStatus.INTERNAL_ERROR
    assert "trial 1 FAIL: amplitude: mismatch" in out
    assert "internal error" in err
    run_verify.assert_called_once()
    assert run_verify.call_args.kwargs["seed"] == 5


@pytest.mark.parametrize("kind", ["circuit", "instance", "p3", "p4"])
def test_gen_is_reproducible(capsys, kind):
    first = run(capsys, "gen", kind, "--seed", "11", "--qubits", "3", "--gates", "5")
    second = run(capsys, "gen", kind, "--seed", "11", "--qubits", "3", "--gates", "5")

    assert first[0] == ExitStatus.SUCCESS
    assert first[1] == second[1]
    assert first[1].splitlines()[1] == "# seed 11"


def test_gen_output_reparses(capsys, write_file):
    sizes = ["--qubits", "2", "--gates", "4"]
    _, out, _ = run(capsys, "gen", "circuit", "--seed", "2", *sizes, "--kl", "2,1")
    c = loads_circuit(out)
    assert (c.n, c.size, c.k, c.l) == (2, 4, 2, 1)
    assert all(g.is_real and g.is_conforming for g in c.gates)

    _, out, _ = run(capsys, "gen", "p3", "--seed", "2", "--qubits", "4")
    path = str(write_file("p3.txt", out))
    assert run(capsys, "circuit", path, "--from", "p3")[0] == ExitStatus.SUCCESS


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["eval"],
        ["circuit", "x.txt"],
        ["verify", "--kl", "4"],
        ["gen", "circuit", "--kl", "0,3"],
        ["gen", "instance", "--qubits", "-1"],
        ["gen", "p3", "--seed", "-4"],
        ["verify", "--trials", "-2"],
        ["verify", "--gates", "two"],
        ["eval", "x.txt", "--threads", "0"],
    ],
)
def test_bad_usage_exits_one(capsys, argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)

    assert excinfo.value.code == ExitStatus.USAGE
    assert capsys.readouterr().out == ""


def test_unknown_log_level(capsys):
    code, out, err = run(capsys, "--log-level", "LOUD", "verify", "--trials", "0")

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "Unknown log level" in err


def test_undecodable_file_reports_line(capsys, tmp_path):
    path = tmp_path / "binary.txt"
    path.write_bytes(b"qswe v1\nn 1 m 1\nx 4 y 3\nA\n\xff\nB\n0\n")

    code, out, err = run(capsys, "eval", str(path))

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "line 5, column 1" in err


def test_non_ascii_digits_are_rejected(capsys, write_file):
    text = "qswe v1\nn ² m 1\nx 4 y 3\nA\n1\nB\n0\n"
    path = str(write_file("superscript.txt", text))

    code, out, err = run(capsys, "eval", path)

    assert code == ExitStatus.USAGE
    assert out == ""
    assert "line 2, column 3" in err
