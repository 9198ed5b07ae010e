"""Text formats for matrices, instances and circuits.

Lines starting with ``#`` are comments and may appear anywhere.

    gf2-matrix v1          qswe v1                qswe-circuit v1
    rows <m> cols <n>      n <n> m <m>            qubits <n>
    <m rows of 0/1>        x <x> y <y>            k <k> l <l>
                           A                      gate <paulis> [+|-]
                           <m rows>               ...
                           B
                           <n rows>
"""

from collections.abc import Iterator
from pathlib import Path

from pydantic import ValidationError

from core.errors import FormatError

from qswe.circuit_model import Circuit, Gate
from qswe.enumerator import QsweInstance
from qswe.gf2_linalg import BitMatrix
from qswe.pauli_algebra import PauliIndex

MATRIX_MAGIC = "gf2-matrix v1"
INSTANCE_MAGIC = "qswe v1"
CIRCUIT_MAGIC = "qswe-circuit v1"


class _LineReader:
    def __init__(self, text: str) -> None:
        self._lines = text.splitlines()
        self._position = 0
        self.line_number = 0

    def _advance(self, keep_blank: bool) -> str | None:
        while self._position < len(self._lines):
            raw = self._lines[self._position].rstrip()
            self._position += 1
            self.line_number = self._position
            if raw.lstrip().startswith("#"):
                continue
            if not raw.strip() and not keep_blank:
                continue

            return raw

        return None

    def next(self, what: str, keep_blank: bool = False) -> str:
        line = self._advance(keep_blank)
        if line is None:
            raise FormatError(
                f"Unexpected end of input, expected {what}", line=self.line_number + 1
            )

        return line

    def expect_exact(self, expected: str) -> None:
        line = self.next(repr(expected)).strip()
        if line != expected:
            raise FormatError(
                f"Expected {expected!r}, got {line!r}", line=self.line_number
            )

    def expect_fields(self, names: tuple[str, ...]) -> list[int]:
        """Parse ``name value name value ...`` with non-negative integer values."""

        line = self.next(" ".join(names))
        tokens = line.split()
        if len(tokens) != 2 * len(names) or tuple(tokens[0::2]) != names:
            expected = " ".join(f"{n} <{n}>" for n in names)
            raise FormatError(
                f"Expected '{expected}', got {line.strip()!r}", self.line_number
            )

        values = []
        for name, token in zip(names, tokens[1::2]):
            if not (token.isascii() and token.isdigit()):
                column = line.find(token, line.find(name) + len(name)) + 1
                raise FormatError(
                    f"{name} must be a non-negative integer, got {token!r}",
                    self.line_number,
                    column,
                )
            values.append(int(token))

        return values

    def bit_rows(self, count: int, width: int) -> BitMatrix:
        rows = []
        for _ in range(count):
            line = self.next(f"a row of {width} bits", keep_blank=width == 0)
            for column, char in enumerate(line, start=1):
                if char not in "01":
                    raise FormatError(
                        f"Unexpected character {char!r} in matrix row",
                        self.line_number,
                        column,
                    )
            if len(line) != width:
                raise FormatError(
                    f"Row has {len(line)} entries, expected {width}",
                    self.line_number,
                    len(line) + 1,
                )
            rows.append(int(line[::-1], 2) if line else 0)

        return BitMatrix(count, width, rows)

    def remaining(self) -> Iterator[str]:
        while (line := self._advance(keep_blank=False)) is not None:
            yield line

    def finish(self) -> None:
        if self._advance(keep_blank=False) is not None:
            raise FormatError("Unexpected trailing content", self.line_number)


def _rows_text(matrix: BitMatrix) -> list[str]:
    return ["".join(map(str, row)) for row in matrix.to_lists()]


def _comment_lines(comments: list[str] | None) -> list[str]:
    return [f"# {comment}" for comment in comments or []]


def loads_matrix(text: str) -> BitMatrix:
    reader = _LineReader(text)
    reader.expect_exact(MATRIX_MAGIC)
    rows, cols = reader.expect_fields(("rows", "cols"))
    matrix = reader.bit_rows(rows, cols)
    reader.finish()

    return matrix


def dumps_matrix(matrix: BitMatrix, comments: list[str] | None = None) -> str:
    lines = [
        MATRIX_MAGIC,
        *_comment_lines(comments),
        f"rows {matrix.rows} cols {matrix.cols}",
        *_rows_text(matrix),
    ]

    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> QsweInstance:
    reader = _LineReader(text)
    reader.expect_exact(INSTANCE_MAGIC)
    n, m = reader.expect_fields(("n", "m"))
    x, y = reader.expect_fields(("x", "y"))
    reader.expect_exact("A")
    a = reader.bit_rows(m, n)
    reader.expect_exact("B")
    b = reader.bit_rows(n, n)
    reader.finish()

    try:
        return QsweInstance(A=a, B=b, x=x, y=y)
    except ValidationError as e:
        raise FormatError(f"Invalid instance: {e.errors()[0]['msg']}", line=3) from e


def dumps_instance(inst: QsweInstance, comments: list[str] | None = None) -> str:
    lines = [
        INSTANCE_MAGIC,
        *_comment_lines(comments),
        f"n {inst.n} m {inst.m}",
        f"x {inst.x} y {inst.y}",
        "A",
        *_rows_text(inst.A),
        "B",
        *_rows_text(inst.B),
    ]

    return "\n".join(lines) + "\n"


def _parse_gate(line: str, n: int, line_number: int) -> Gate:
    tokens = line.split()
    if not tokens or tokens[0] != "gate" or len(tokens) > 3:
        raise FormatError(
            f"Expected 'gate <paulis> [+|-]', got {line.strip()!r}", line_number
        )

    rest = tokens[1:]
    epsilon = None
    if rest and rest[-1] in ("+", "-"):
        epsilon = 1 if rest.pop() == "+" else -1
    if len(rest) > 1:
        raise FormatError(
            f"Expected one Pauli string, got {' '.join(rest)!r}", line_number
        )

    paulis = rest[0] if rest else ""
    column = line.find(paulis) + 1 if paulis else len(line) + 1
    try:
        PauliIndex.from_string(paulis)
    except FormatError as e:
        message = str(e).split(": ", 1)[-1]
        raise FormatError(message, line_number, column + e.column - 1) from e
    if len(paulis) != n:
        raise FormatError(
            f"Gate acts on {len(paulis)} qubits, circuit has {n}", line_number, column
        )

    return Gate.from_string(paulis, epsilon)


def loads_circuit(text: str) -> Circuit:
    reader = _LineReader(text)
    reader.expect_exact(CIRCUIT_MAGIC)
    (n,) = reader.expect_fields(("qubits",))
    k, l = reader.expect_fields(("k", "l"))
    if k < 1 or l < 1:
        raise FormatError("k and l must be positive integers", reader.line_number)

    gates = []
    for line in reader.remaining():
        gates.append(_parse_gate(line, n, reader.line_number))

    return Circuit(n=n, gates=tuple(gates), k=k, l=l)


def gate_text(gate: Gate) -> str:
    sign = "+" if gate.epsilon > 0 else "-"
    paulis = gate.index.to_string()

    return f"gate {paulis} {sign}" if paulis else f"gate {sign}"


def dumps_circuit(c: Circuit, comments: list[str] | None = None) -> str:
    lines = [
        CIRCUIT_MAGIC,
        *_comment_lines(comments),
        f"qubits {c.n}",
        f"k {c.k} l {c.l}",
        *(gate_text(gate) for gate in c.gates),
    ]

    return "\n".join(lines) + "\n"


def read_text(path: Path | str) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e.strerror}", line=0) from e

    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        line = data.count(b"\n", 0, e.start) + 1
        message = f"Invalid UTF-8 byte {data[e.start]:#04x}"
        raise FormatError(message, line, e.start - line_start + 1) from e


def load_matrix(path: Path | str) -> BitMatrix:
    return loads_matrix(read_text(path))


def load_instance(path: Path | str) -> QsweInstance:
    return loads_instance(read_text(path))


def load_circuit(path: Path | str) -> Circuit:
    return loads_circuit(read_text(path))


__all__ = [
    "dumps_circuit",
    "dumps_instance",
    "dumps_matrix",
    "gate_text",
    "load_circuit",
    "load_instance",
    "load_matrix",
    "loads_circuit",
    "loads_instance",
    "loads_matrix",
]
