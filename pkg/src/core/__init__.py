from . import config, errors, lib, logger_utils
from .logger_utils import get_logger

__all__ = ["get_logger", "logger_utils", "config", "errors", "lib"]
