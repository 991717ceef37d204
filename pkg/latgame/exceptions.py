"""Exceptions raised by the latgame engine."""
from typing import Optional


class LatgameError(Exception):
    """Base class for all latgame errors."""


class InvalidInputError(LatgameError, ValueError):
    """Raised when an argument violates a documented precondition."""


class UnsupportedError(LatgameError, ValueError):
    """Raised for inputs the model deliberately does not treat."""


class UnsupportedDimensionError(UnsupportedError):
    """Raised when an operation is only defined for a specific lattice dimension."""


class ContractViolationError(LatgameError, RuntimeError):
    """Raised when an internal guarantee fails, which signals misuse of an operation."""


class ConfigParseError(InvalidInputError):
    """Raised when an experiment configuration cannot be parsed or validated.

    Attributes:
        line: 1-based line number of the offending entry, 0 when the problem
            is not tied to a line (for example a missing key).
    """

    def __init__(self, message: str, line: int = 0):
        self.line = line
        prefix = f"line {line}: " if line else ""
        super().__init__(f"{prefix}{message}")


class ArtifactError(LatgameError, OSError):
    """Raised when an artifact cannot be read or written."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        suffix = f" ({path})" if path else ""
        super().__init__(f"{message}{suffix}")
