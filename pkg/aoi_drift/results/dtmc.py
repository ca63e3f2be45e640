"""
Markov-chain oracle result types.

This module defines the truncated transition matrix over joint states
(δ, Δ), its stationary solution, and the records produced when the
reference transition case tables are checked against the generated chain.
"""

from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from ..core import Channel, DriftModel


class JointState(NamedTuple):
    """Chain state: current slot drift ``k`` and current AoI ``i``."""

    k: int
    i: int


@dataclass(eq=False)
class TransitionMatrix:
    """Row-stochastic matrix over enumerated joint states.

    States are ordered by drift ascending, then AoI ascending. AoI values
    above ``i_max`` are folded into the top bucket ``i_max`` of their row.

    Attributes:
        model: The drift model the chain was generated from.
        channel: The erasure channel.
        states: Enumerated states; ``states[n]`` indexes row/column ``n``.
        matrix: Dense array with ``matrix[a, b] = P[a -> b]``.
        i_max: Truncation index.
    """

    model: DriftModel
    channel: Channel
    states: tuple[JointState, ...]
    matrix: np.ndarray
    i_max: int

    def __post_init__(self) -> None:
        self._index = {state: n for n, state in enumerate(self.states)}

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted({state.k for state in self.states}))

    def index(self, state: JointState) -> int:
        return self._index[state]

    def __contains__(self, state: object) -> bool:
        return state in self._index

    def prob(self, src: JointState, dst: JointState) -> float:
        """P[src -> dst]; zero when either state is not enumerated."""
        if src not in self._index or dst not in self._index:
            return 0.0
        return float(self.matrix[self._index[src], self._index[dst]])

    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)


@dataclass(eq=False)
class StationarySolution:
    """Stationary vector of a TransitionMatrix with solver diagnostics.

    Attributes:
        chain: The solved chain.
        vector: Stationary probabilities aligned with ``chain.states``.
        method: "power" or "direct".
        iterations: Power-iteration steps (1 for the direct solve).
        convergence_error: ‖πP − π‖∞ of the returned vector.
        residual: Mass held by the truncation buckets (states with i = i_max).
    """

    chain: TransitionMatrix
    vector: np.ndarray
    method: str
    iterations: int
    convergence_error: float
    residual: float

    def pi(self, k: int, i: int) -> float:
        state = JointState(k, i)
        if state not in self.chain:
            return 0.0
        return float(self.vector[self.chain.index(state)])

    def table(self) -> np.ndarray:
        """π as an array of shape (len(support), i_max), zeros outside the state set."""
        support = self.chain.support
        out = np.zeros((len(support), self.chain.i_max))
        for state, value in zip(self.chain.states, self.vector):
            out[support.index(state.k), state.i - 1] = value
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "iterations": self.iterations,
            "convergence_error": self.convergence_error,
            "residual": self.residual,
            "i_max": self.chain.i_max,
            "n_states": len(self.chain.states),
        }


class AoiMean(NamedTuple):
    """Mean AoI over the truncated support and a bound on the truncation bias."""

    value: float
    residual_bound: float


@dataclass(frozen=True)
class CaseMismatch:
    """One transition where a reference case table disagrees with the generated chain."""

    src: JointState
    dst: JointState
    generated: float
    table: float
    case: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "src": list(self.src),
            "dst": list(self.dst),
            "generated": self.generated,
            "table": self.table,
            "case": self.case,
        }
