class QsweBaseException(Exception):
    pass


class ImproperlyConfigured(QsweBaseException):
    pass


class DimensionMismatch(QsweBaseException, ValueError):
    pass


class PreconditionViolated(QsweBaseException, ValueError):
    pass


class LimitExceeded(QsweBaseException):
    def __init__(self, message: str, limit: int) -> None:
        super().__init__(f"{message} (limit {limit})")
        self.limit = limit


class ComplexGateError(PreconditionViolated):
    def __init__(self, gate_position: int) -> None:
        super().__init__(
            f"Gate {gate_position} is complex (even number of Y factors). "
            "Run the circuit through embed-real first."
        )
        self.gate_position = gate_position


class FormatError(QsweBaseException, ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class PromiseViolated(QsweBaseException):
    """Raised by the sign solvers when the promise on the magnitude fails.

    The exact value that failed the promise is kept on ``value``.
    """

    def __init__(self, message: str, value) -> None:
        super().__init__(f"{message}: {value}")
        self.value = value


class InternalInvariantError(QsweBaseException):
    pass
