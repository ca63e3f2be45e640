"""
Base types, enums, and shared constants for drift models.

This module defines the core components used across the toolkit:
- The tagged base dataclass every drift model inherits from
- The drift-model enumeration
- The Bernoulli erasure channel
- Numerical tolerances and defaults shared by all engines
"""

from dataclasses import dataclass
from enum import Enum

# Feasibility checks absorb decimal-literal rounding up to this tolerance.
PROB_TOL = 1e-12
# Truncation stops once the geometric tail ratio p_f^i drops below this.
TAIL_EPS = 1e-12
TRUNCATION_CAP = 10_000
# Largest Markov chain the dense solver builds (the matrix is states x states).
MAX_CHAIN_STATES = 15_000
HISTOGRAM_CAP = 10_000
N_BATCHES = 100
DEFAULT_SLOTS = 1_000_000
DEFAULT_SEED = 1


class DriftKind(str, Enum):
    """Variant tag of a clock-drift process."""

    DETERMINISTIC = "deterministic"
    POSITIVE = "positive"
    TERNARY = "ternary"


@dataclass(frozen=True, kw_only=True)
class DriftModel:
    """Base class for all clock-drift models.

    All model classes inherit from this base class and are dispatched on
    their ``type`` tag by validation, sampling, formatting and the engines.

    Attributes:
        type: A required tag identifying the drift process. Subclasses fix
              it with a default so callers never pass it explicitly.

    Example:
        @dataclass(frozen=True, kw_only=True)
        class Deterministic(DriftModel):
            type: DriftKind = DriftKind.DETERMINISTIC
            d: int
    """

    type: DriftKind


@dataclass(frozen=True, kw_only=True)
class Channel:
    """Bernoulli erasure channel between transmitter and receiver.

    Attributes:
        p_s: Per-slot probability that an update is decoded successfully.
    """

    p_s: float

    @property
    def p_f(self) -> float:
        """Per-slot probability of a decoding failure."""
        return 1.0 - self.p_s
