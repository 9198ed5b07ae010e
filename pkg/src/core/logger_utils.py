import logging
import sys

import structlog

from core.errors import ImproperlyConfigured


def configure_logging(level: str = "WARNING") -> None:
    """Send structlog events to stderr; stdout is reserved for artifacts."""

    numeric_level = logging.getLevelNamesMapping().get(level.upper())
    if numeric_level is None:
        raise ImproperlyConfigured(f"Unknown log level {level!r}")

    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(cls: str):
    return structlog.get_logger().bind(cls=cls)
