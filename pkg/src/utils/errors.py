"""Error types raised across the FBKAN library and harness."""

from typing import Any, Dict, Optional


class FbkanError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(FbkanError, ValueError):
    """An argument violates an operation's precondition."""


class CoverageViolationError(FbkanError, ValueError):
    """A point lies outside the support of every partition-of-unity function."""


class NumericalFailureError(FbkanError, ArithmeticError):
    """A computation produced non-finite values or a singular system.

    Args:
        message: Human readable description
        term: Name of the offending loss term, when known
    """

    def __init__(self, message: str, term: Optional[str] = None):
        super().__init__(message)
        self.term = term


class ConfigError(FbkanError, ValueError):
    """A run configuration is invalid; ``key`` is the dotted path at fault."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class TrainingAborted(FbkanError):
    """Training stopped on a numerical failure.

    Carries enough state to write a diagnostic snapshot.
    """

    def __init__(
        self,
        iteration: int,
        cause: NumericalFailureError,
        last_row: Optional[Dict[str, Any]] = None,
        snapshot: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(f"training aborted at iteration {iteration}: {cause}")
        self.iteration = iteration
        self.cause = cause
        self.last_row = last_row
        self.snapshot = snapshot
