"""Exception hierarchy and CLI exit codes"""

from enum import Enum


class ErrorCode(Enum):
    """Process exit statuses, one per error family"""
    UNEXPECTED = 1
    CONFIG = 2
    PATH = 3
    PARAMETER = 4
    MODEL = 5


class SmbsError(Exception):
    """Base exception for all smbs errors"""
    code = ErrorCode.UNEXPECTED


class ConfigError(SmbsError):
    """Raised when a config file or one of its keys is missing or invalid"""
    code = ErrorCode.CONFIG


class PathError(SmbsError):
    """Raised for empty paths, unknown states and inconsistent path data"""
    code = ErrorCode.PATH


class ParameterError(SmbsError):
    """Raised when prior parameters violate their invariants"""
    code = ErrorCode.PARAMETER


class ModelError(SmbsError):
    """
    Raised when a computation has no defined value under the model

    Typical causes are a centering distribution with no mass at or beyond a
    holding age that the data or the simulation reaches, an urn with zero
    total mass, or a reinforcement walk that exceeds its iteration cap.
    """
    code = ErrorCode.MODEL


def exit_code(error: Exception) -> int:
    """Map an exception to the CLI exit status"""
    if isinstance(error, SmbsError):
        return error.code.value
    return ErrorCode.UNEXPECTED.value
