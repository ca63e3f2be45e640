"""
Per-slot AoI recursions for each drift model.

The simulator evolves AoI with these functions and the Markov-chain oracle
derives its transitions from them, so both engines share one ground truth.
Each step maps (Δ(t−1), δ(t−1), δ(t), h(t)) to Δ(t).
"""

from collections.abc import Callable

from .base import DriftModel
from .drift import CategoricalPositive, Deterministic, Ternary, validate

type StepFn = Callable[[int, int, int, bool], int]


def step_deterministic(prev_aoi: int, prev_drift: int, drift: int, success: bool) -> int:
    """Constant drift d: d+1 on success, Δ(t−1)+1 on failure."""
    if success:
        return drift + 1
    return prev_aoi + 1


def step_positive(prev_aoi: int, prev_drift: int, drift: int, success: bool) -> int:
    """Drift in {0..K}: δ(t)+1 on success, max{1, Δ(t−1)+δ(t)−δ(t−1)+1} on failure."""
    if success:
        return drift + 1
    return max(1, prev_aoi + drift - prev_drift + 1)


def step_ternary(prev_aoi: int, prev_drift: int, drift: int, success: bool) -> int:
    """Drift in {−1,0,1}: max{1, δ(t)+1} on success, same failure branch as positive drift."""
    if success:
        return max(1, drift + 1)
    return max(1, prev_aoi + drift - prev_drift + 1)


def step_nodrift(prev_aoi: int, success: bool) -> int:
    """Synchronised clocks: 1 on success, Δ(t−1)+1 on failure."""
    return 1 if success else prev_aoi + 1


def recursion_for(model: DriftModel) -> StepFn:
    """The recursion that governs ``model``."""
    validate(model)
    match model:
        case Deterministic():
            return step_deterministic
        case CategoricalPositive():
            return step_positive
        case Ternary():
            return step_ternary
    raise AssertionError("validate() admits only known drift models")
