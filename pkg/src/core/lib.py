from core.errors import PreconditionViolated


def parse_kl(value: str) -> tuple[int, int]:
    """Parse a ``k,l`` pair of positive integers."""

    tokens = value.split(",")
    if len(tokens) != 2:
        raise PreconditionViolated(f"Expected 'k,l', got {value!r}")

    try:
        k, l = int(tokens[0]), int(tokens[1])
    except ValueError as e:
        raise PreconditionViolated(f"Expected integers in 'k,l', got {value!r}") from e

    if k < 1 or l < 1:
        raise PreconditionViolated(f"k and l must be positive, got {value!r}")

    return k, l


def sign_of(value: int) -> int:
    return (value > 0) - (value < 0)
