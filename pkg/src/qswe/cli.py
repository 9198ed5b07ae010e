"""Command-line entry point: ``qswe <command> ...``.

Artifacts go to standard output, diagnostics to standard error.
"""

import argparse
import sys
from enum import IntEnum
from pathlib import Path

import numpy as np

from core.config import settings
from core.errors import (
    FormatError,
    InternalInvariantError,
    PreconditionViolated,
    PromiseViolated,
    QsweBaseException,
)
from core.lib import parse_kl, sign_of
from core.logger_utils import configure_logging, get_logger

from qswe import formats
from qswe.circuit_model import Circuit, embed_real
from qswe.enumerator import (
    QsweInstance,
    classify_shape,
    evaluate,
    evaluate_naive,
    is_p3,
    is_p4,
    p3_instance,
    p4_block,
    p4_instance,
    promise_holds,
)
from qswe.exact_sim import (
    MachineModel,
    amplitude00,
    normalized_trace,
    prob_first_qubit_one,
    sign_amplitude,
    sign_trace,
    solve_first_qubit,
)
from qswe.generators import (
    random_circuit,
    random_instance,
    random_mixed_circuit,
    random_p3_matrix,
)
from qswe.gf2_linalg import BitMatrix
from qswe.reduction import (
    amplitude_instance,
    canonicalize_p3,
    p3_to_circuit,
    p4_to_circuit,
    path_sum_matrix,
    trace_instance,
)
from qswe.verification import run_verify

logger = get_logger(__name__)


class ExitStatus(IntEnum):
    SUCCESS = 0
    USAGE = 1
    PROMISE_VIOLATED = 2
    INTERNAL_ERROR = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitStatus.USAGE, f"{self.prog}: error: {message}\n")


def _kl(value: str) -> tuple[int, int]:
    try:
        return parse_kl(value)
    except PreconditionViolated as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _count(value: str) -> int:
    message = f"expected a non-negative integer, got {value!r}"
    try:
        count = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(message) from e
    if count < 0:
        raise argparse.ArgumentTypeError(message)

    return count


def _positive(value: str) -> int:
    count = _count(value)
    if count == 0:
        raise argparse.ArgumentTypeError(
            f"expected a positive integer, got {value!r}"
        )

    return count


def _sign_text(value) -> str:
    return "+" if sign_of(value) >= 0 else "-"


def _scale_comment(c: Circuit) -> list[str]:
    return [f"scale {c.size} k {c.k} l {c.l}"]


def cmd_eval(args: argparse.Namespace) -> str:
    inst = formats.load_instance(args.file)
    if args.naive:
        value = evaluate_naive(inst)
    else:
        value = evaluate(
            inst, workers=args.threads, max_kernel_dim=args.max_kernel_dim
        )

    if not args.sign:
        return f"{value}\n"

    if not promise_holds(value, inst.x, inst.y, inst.n):
        raise PromiseViolated("|S| < (x^2 + y^2)^(n/2) / 2", value)

    return f"{_sign_text(value)}\n"


def cmd_reduce(args: argparse.Namespace) -> str:
    c = formats.load_circuit(args.file)
    if args.canonical:
        inst = canonicalize_p3(c)
    elif args.target == "trace":
        inst = trace_instance(c)
    else:
        inst = amplitude_instance(c)

    return formats.dumps_instance(inst, comments=_scale_comment(c))


def _first_content_line(text: str) -> str:
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            return line.strip()

    return ""


def _circuit_source(
    path: Path, shape: str, kl: tuple[int, int] | None
) -> tuple[BitMatrix, int, int]:
    """The square matrix behind a P3/P4 instance file or a bare ``gf2-matrix`` file."""

    text = formats.read_text(path)
    if _first_content_line(text) == formats.MATRIX_MAGIC:
        k, l = kl or (4, 3)
        return formats.loads_matrix(text), k, l

    inst = formats.loads_instance(text)
    k, l = kl or (inst.y, inst.x)
    shape_name = classify_shape(inst).value
    if shape == "p3":
        if not is_p3(inst):
            raise PreconditionViolated(
                f"Instance is {shape_name}, not P3: "
                "need A square, diag(A) = I and B = lwtr(A)"
            )
        return inst.A, k, l

    if not is_p4(inst):
        raise PreconditionViolated(
            f"Instance is {shape_name}, not P4: "
            "need A = [C; C^T], diag(C) = I and B = lwtr(C)"
        )

    return p4_block(inst), k, l


def cmd_circuit(args: argparse.Namespace) -> str:
    matrix, k, l = _circuit_source(args.file, args.shape, args.kl)
    to_circuit = p3_to_circuit if args.shape == "p3" else p4_to_circuit

    return formats.dumps_circuit(to_circuit(matrix, k, l))


def _cell_text(re: int, im: int) -> str:
    if not im:
        return str(re)

    return f"{re}{'+' if im > 0 else '-'}{abs(im)}i"


def _dense_rows(re: np.ndarray, im: np.ndarray) -> list[str]:
    return [
        " ".join(_cell_text(int(a), int(b)) for a, b in zip(re_row, im_row))
        for re_row, im_row in zip(re, im)
    ]


def cmd_sim(args: argparse.Namespace) -> str:
    c = formats.load_circuit(args.file)
    model = MachineModel(args.model)

    match args.what:
        case "amplitude":
            if args.sign:
                return f"{_sign_text(sign_amplitude(c))}\n"
            return f"{amplitude00(c).render()}\n"
        case "trace":
            if args.sign:
                return f"{_sign_text(sign_trace(c))}\n"
            return f"{normalized_trace(c).render()}\n"
        case "prob":
            if args.sign:
                return f"{_sign_text(solve_first_qubit(c, model))}\n"
            return f"{prob_first_qubit_one(c, model)}\n"
        case "pathsum":
            expansion = path_sum_matrix(c)
            header = f"# scale {expansion.scale} base {expansion.base}"
            return "\n".join([header, *_dense_rows(expansion.re, expansion.im)]) + "\n"
        case _:
            raise PreconditionViolated(f"Unknown quantity {args.what!r}")


def cmd_embed(args: argparse.Namespace) -> str:
    return formats.dumps_circuit(embed_real(formats.load_circuit(args.file)))


def cmd_verify(args: argparse.Namespace) -> str:
    k, l = args.kl
    report = run_verify(
        seed=args.seed,
        qubits=args.qubits,
        gates=args.gates,
        trials=args.trials,
        k=k,
        l=l,
        workers=args.threads,
        progress=args.progress,
    )
    if not report.passed:
        sys.stdout.write(report.render() + "\n")
        raise InternalInvariantError(
            f"{report.failed_count} of {len(report.trials)} trials failed"
        )

    return report.render() + "\n"


def cmd_gen(args: argparse.Namespace) -> str:
    rng = np.random.default_rng(args.seed)
    k, l = args.kl
    comments = [f"seed {args.seed}"]

    match args.kind:
        case "circuit":
            if args.mixed:
                c = random_mixed_circuit(rng, args.qubits, args.gates, k=k, l=l)
            else:
                conforming = not args.nonconforming
                c = random_circuit(
                    rng, args.qubits, args.gates, k=k, l=l, conforming=conforming
                )
            return formats.dumps_circuit(c, comments=comments)
        case "instance":
            rows = args.qubits if args.rows is None else args.rows
            inst: QsweInstance = random_instance(rng, args.qubits, rows, x=l, y=k)
            return formats.dumps_instance(inst, comments=comments)
        case "p3":
            inst = p3_instance(random_p3_matrix(rng, args.qubits), x=l, y=k)
            return formats.dumps_instance(inst, comments=comments)
        case "p4":
            inst = p4_instance(random_p3_matrix(rng, args.qubits), x=l, y=k)
            return formats.dumps_instance(inst, comments=comments)
        case _:
            raise PreconditionViolated(f"Unknown artifact {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="qswe",
        description=(
            "Quadratically signed weight enumerators and real Pauli-rotation circuits."
        ),
    )
    parser.add_argument(
        "--log-level", default=None, help="structlog level for diagnostics on stderr"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    eval_parser = commands.add_parser("eval", help="Evaluate S(A, B, x, y) exactly")
    eval_parser.add_argument("file", type=Path, help="Instance file (qswe v1)")
    eval_parser.add_argument(
        "--naive",
        action="store_true",
        help="Scan all 2^n vectors instead of the kernel",
    )
    eval_parser.add_argument(
        "--sign",
        action="store_true",
        help="Print the sign under the promise |S| >= (x^2+y^2)^(n/2)/2",
    )
    eval_parser.add_argument(
        "--max-kernel-dim",
        type=_count,
        default=None,
        help="Override QSWE_KERNEL_DIMENSION_LIMIT",
    )
    eval_parser.add_argument(
        "--threads", type=_positive, default=None, help="Override QSWE_THREADS"
    )
    eval_parser.set_defaults(handler=cmd_eval)

    reduce_parser = commands.add_parser(
        "reduce", help="Turn a real circuit into an instance"
    )
    reduce_parser.add_argument("file", type=Path, help="Circuit file (qswe-circuit v1)")
    reduce_parser.add_argument(
        "--target", choices=["amplitude", "trace"], default="amplitude"
    )
    reduce_parser.add_argument(
        "--canonical",
        action="store_true",
        help="Emit the (A', lwtr(A')) form of the amplitude",
    )
    reduce_parser.set_defaults(handler=cmd_reduce)

    circuit_parser = commands.add_parser(
        "circuit", help="Turn a P3 or P4 instance into a circuit"
    )
    circuit_parser.add_argument(
        "file", type=Path, help="Instance file or gf2-matrix file"
    )
    circuit_parser.add_argument(
        "--from", dest="shape", choices=["p3", "p4"], required=True
    )
    circuit_parser.add_argument(
        "--kl",
        type=_kl,
        default=None,
        help="Rotation k,l (defaults to y,x of the instance)",
    )
    circuit_parser.set_defaults(handler=cmd_circuit)

    sim_parser = commands.add_parser("sim", help="Exact simulation of a circuit")
    sim_parser.add_argument("file", type=Path, help="Circuit file (qswe-circuit v1)")
    sim_parser.add_argument(
        "--what",
        choices=["amplitude", "trace", "prob", "pathsum"],
        default="amplitude",
    )
    sim_parser.add_argument(
        "--model",
        choices=[m.value for m in MachineModel],
        default=MachineModel.QRAM.value,
    )
    sim_parser.add_argument(
        "--sign",
        action="store_true",
        help="Decide the sign under the promise instead",
    )
    sim_parser.set_defaults(handler=cmd_sim)

    embed_parser = commands.add_parser(
        "embed-real", help="Add a phase qubit so every gate is real"
    )
    embed_parser.add_argument("file", type=Path, help="Circuit file (qswe-circuit v1)")
    embed_parser.set_defaults(handler=cmd_embed)

    verify_parser = commands.add_parser(
        "verify", help="Cross-check reductions against the simulator"
    )
    verify_parser.add_argument("--seed", type=_count, default=0)
    verify_parser.add_argument("--qubits", type=_count, default=3)
    verify_parser.add_argument("--gates", type=_count, default=8)
    verify_parser.add_argument("--trials", type=_count, default=25)
    verify_parser.add_argument("--kl", type=_kl, default=(4, 3))
    verify_parser.add_argument(
        "--threads", type=_positive, default=None, help="Override QSWE_THREADS"
    )
    verify_parser.add_argument(
        "--progress", action="store_true", help="Show a progress bar on stderr"
    )
    verify_parser.set_defaults(handler=cmd_verify)

    gen_parser = commands.add_parser("gen", help="Generate seeded random artifacts")
    gen_parser.add_argument("kind", choices=["circuit", "instance", "p3", "p4"])
    gen_parser.add_argument("--seed", type=_count, default=0)
    gen_parser.add_argument(
        "--qubits", type=_count, default=3, help="Qubits, or variables n for instances"
    )
    gen_parser.add_argument("--gates", type=_count, default=8)
    gen_parser.add_argument(
        "--rows",
        type=_count,
        default=None,
        help="Constraint rows m for random instances",
    )
    gen_parser.add_argument(
        "--kl", type=_kl, default=(4, 3), help="k,l; instances get x = l and y = k"
    )
    gen_parser.add_argument("--mixed", action="store_true", help="Allow complex gates")
    gen_parser.add_argument(
        "--nonconforming",
        action="store_true",
        help="Random orientations for real gates",
    )
    gen_parser.set_defaults(handler=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        configure_logging(args.log_level or settings.QSWE_LOG_LEVEL)
        output = args.handler(args)
    except PromiseViolated as e:
        print(f"promise violated: {e}", file=sys.stderr)
        return ExitStatus.PROMISE_VIOLATED
    except InternalInvariantError as e:
        logger.error("Internal invariant failed.", command=args.command, error=str(e))
        print(f"internal error: {e}", file=sys.stderr)
        return ExitStatus.INTERNAL_ERROR
    except FormatError as e:
        print(f"{getattr(args, 'file', 'input')}: {e}", file=sys.stderr)
        return ExitStatus.USAGE
    except QsweBaseException as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitStatus.USAGE

    sys.stdout.write(output)

    return ExitStatus.SUCCESS


if __name__ == "__main__":
    sys.exit(main())
