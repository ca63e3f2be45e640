"""
Distribution result types shared by the engines.

This module defines the foundation for every engine output:
- GeometricTail: the closed-form tail every AoI distribution ends in
- AoiPmf: AoI distribution as an enumerated prefix plus analytic tail
- JointStationary: joint drift/AoI distribution with analytic row tails
- EntryDiscrepancy: diagnostic record of a table entry with two readings

All AoI values are integers i >= 1. Arrays are indexed so that
``prefix[i - 1]`` holds the probability of AoI ``i``.
"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np


@dataclass(frozen=True)
class GeometricTail:
    """Sequence ``head * ratio**(i - start)`` for every ``i >= start``.

    Attributes:
        start: First index in the geometric regime.
        head: Value at ``start``.
        ratio: Common ratio p_f, strictly below 1.
    """

    start: int
    head: float
    ratio: float

    def value(self, i: int) -> float:
        if i < self.start:
            raise ValueError(f"index {i} precedes the geometric regime starting at {self.start}")
        return self.head * self.ratio ** (i - self.start)

    def mass_after(self, n: int) -> float:
        """Sum of the values at indices ``> n`` (requires ``n >= start - 1``)."""
        if n < self.start - 1:
            raise ValueError(f"tail sums start at index {self.start}, got n={n}")
        return self.head * self.ratio ** (n + 1 - self.start) / (1.0 - self.ratio)

    def moment_after(self, n: int) -> float:
        """Sum of ``i * value(i)`` over indices ``> n`` (arithmetico-geometric series)."""
        if n < self.start - 1:
            raise ValueError(f"tail sums start at index {self.start}, got n={n}")
        q = 1.0 - self.ratio
        first = self.head * self.ratio ** (n + 1 - self.start)
        return first * ((n + 1) / q + self.ratio / (q * q))


@dataclass(eq=False)
class AoiPmf:
    """AoI distribution on i >= 1.

    Attributes:
        prefix: Probabilities of AoI 1..i_max.
        tail: Closed form beyond ``i_max``; None means no mass beyond it.
        source: Engine that produced the pmf ("analytic", "dtmc", ...).
    """

    prefix: np.ndarray
    tail: Optional[GeometricTail] = None
    source: str = "analytic"

    @property
    def i_max(self) -> int:
        return len(self.prefix)

    @property
    def residual(self) -> float:
        """Mass beyond ``i_max``, summed in closed form."""
        return self.tail.mass_after(self.i_max) if self.tail else 0.0

    def prob(self, i: int) -> float:
        if i < 1:
            return 0.0
        if i <= self.i_max:
            return float(self.prefix[i - 1])
        return self.tail.value(i) if self.tail else 0.0

    def tail_mass(self, n: int) -> float:
        """P[Δ > n]."""
        if n >= self.i_max:
            return self.tail.mass_after(n) if self.tail else 0.0
        return float(self.prefix[max(n, 0):].sum()) + self.residual

    def total(self) -> float:
        return float(self.prefix.sum()) + self.residual

    def mean(self) -> float:
        """Σ i·P[Δ = i] with the tail beyond ``i_max`` summed analytically."""
        support = np.arange(1, self.i_max + 1, dtype=np.float64)
        head = float(np.dot(support, self.prefix))
        return head + (self.tail.moment_after(self.i_max) if self.tail else 0.0)

    def as_dict(self) -> dict[int, float]:
        """Enumerated prefix keyed by AoI value."""
        return {i + 1: float(v) for i, v in enumerate(self.prefix)}

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "i_max": self.i_max,
            "residual": self.residual,
            "mean": self.mean(),
            "pmf": [float(v) for v in self.prefix],
        }


@dataclass(frozen=True)
class EntryDiscrepancy:
    """A joint-table entry whose reference reading differs from the implemented one."""

    k: int
    i: int
    literal: float
    implemented: float
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "i": self.i,
            "literal": self.literal,
            "implemented": self.implemented,
            "note": self.note,
        }


@dataclass(eq=False)
class JointStationary:
    """Joint stationary distribution π(k, i) over drift k and AoI i.

    Attributes:
        support: Drift values, in category order; row ``r`` of ``table``
                 belongs to ``support[r]``.
        table: Array of shape (len(support), i_max).
        row_tails: Closed-form continuation of each row beyond ``i_max``.
        discrepancies: Diagnostic entries with a competing reference reading.
    """

    support: tuple[int, ...]
    table: np.ndarray
    row_tails: tuple[Optional[GeometricTail], ...]
    discrepancies: tuple[EntryDiscrepancy, ...] = field(default_factory=tuple)

    @property
    def i_max(self) -> int:
        return int(self.table.shape[1])

    @property
    def residual(self) -> float:
        """Total mass beyond ``i_max`` over all rows."""
        return sum(tail.mass_after(self.i_max) for tail in self.row_tails if tail)

    def _row(self, k: int) -> Optional[int]:
        try:
            return self.support.index(k)
        except ValueError:
            return None

    def pi(self, k: int, i: int) -> float:
        row = self._row(k)
        if row is None or i < 1:
            return 0.0
        if i <= self.i_max:
            return float(self.table[row, i - 1])
        tail = self.row_tails[row]
        return tail.value(i) if tail else 0.0

    def marginal(self, k: int) -> float:
        """Σ_i π(k, i), row tail included analytically."""
        row = self._row(k)
        if row is None:
            return 0.0
        tail = self.row_tails[row]
        return float(self.table[row].sum()) + (tail.mass_after(self.i_max) if tail else 0.0)

    def column_sums(self) -> np.ndarray:
        """Σ_k π(k, i) for i = 1..i_max."""
        return self.table.sum(axis=0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "support": list(self.support),
            "i_max": self.i_max,
            "residual": self.residual,
            "table": [[float(v) for v in row] for row in self.table],
            "discrepancies": [entry.to_dict() for entry in self.discrepancies],
        }
