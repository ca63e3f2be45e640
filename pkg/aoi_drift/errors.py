"""
Error handling for the aoi_drift toolkit.

This module provides structured errors for model validation, truncation,
solver convergence and simulation consistency, so that callers (and the
command-line front end) can tell which constraint failed and with which
values.
"""

from typing import Any, Optional


class AoiDriftError(Exception):
    """
    Root exception for every error raised by aoi_drift.

    The CLI maps any subclass to exit code 2.
    """

    pass


class ModelError(AoiDriftError):
    """
    Exception raised when a drift model or channel violates a constraint.

    Provides the name of the violated constraint and the offending values
    for further inspection.
    """

    def __init__(
        self, message: str, constraint: str, values: Optional[dict[str, Any]] = None
    ):
        """
        Initialize a new ModelError.

        Args:
            message: Human-readable error description
            constraint: Short name of the violated constraint
            values: Parameter values that triggered the error
        """
        self.message = message
        self.constraint = constraint
        self.values = dict(values or {})
        super().__init__(message)


class InfeasibleDrift(ModelError):
    """Raised when drift probabilities cannot form a distribution (e.g. K·p > 1)."""

    pass


class NegativeProbability(ModelError):
    """Raised when a probability lies outside [0, 1]."""

    pass


class BadParameter(ModelError):
    """Raised for out-of-domain parameters (p_s = 0, d < 0, K < 1, ...)."""

    pass


class TruncationTooSmall(AoiDriftError):
    """
    Exception raised when a truncation index cannot hold the model support
    or leaves too much probability mass outside the enumerated states.
    """

    def __init__(self, message: str, i_max: int, required: Optional[float] = None):
        """
        Initialize a new TruncationTooSmall.

        Args:
            message: Human-readable error description
            i_max: The truncation index that was used
            required: The smallest acceptable index, or the offending bound
        """
        self.i_max = i_max
        self.required = required
        super().__init__(message)


class NoConvergence(AoiDriftError):
    """Raised when power iteration exhausts its iteration budget."""

    def __init__(self, iterations: int, error: float, tol: float):
        self.iterations = iterations
        self.error = error
        self.tol = tol
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(error {error:.3e} > tol {tol:.3e})"
        )


class ViewMismatch(AoiDriftError):
    """
    Exception raised when the recursion and timestamp views of the AoI disagree.

    This indicates an implementation bug and is never expected in a correct run.
    """

    def __init__(self, t: int, aoi_recursion: int, aoi_timestamp: int):
        self.t = t
        self.aoi_recursion = aoi_recursion
        self.aoi_timestamp = aoi_timestamp

        detailed_message = (
            f"AoI views disagree at slot {t}: "
            f"recursion={aoi_recursion}, timestamp={aoi_timestamp}"
        )
        detailed_message += "\n\nThe recursion and timestamp views are equal by construction."
        detailed_message += "\nA mismatch means the simulator state update is broken."

        super().__init__(detailed_message)


class BadSchedule(AoiDriftError):
    """Raised for malformed explicit trace schedules."""

    pass


class ConfigError(AoiDriftError):
    """
    Exception raised for a malformed configuration file.

    Provides the file path and line number of the offending entry.
    """

    def __init__(self, message: str, path: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")
