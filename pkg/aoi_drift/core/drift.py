"""
Clock-drift models, parameter validation and drift sampling.

Three i.i.d. per-slot drift processes are supported:
- Deterministic: the receiver clock is always ``d`` slots ahead
- CategoricalPositive: δ ∈ {0..K} with P[δ=0] = 1 − K·p and P[δ=k] = p
- Ternary: δ ∈ {−1, 0, 1} with probabilities (p_minus, p_0, p_1)

Every downstream operation calls ``validate`` first, so a model that
``validate`` rejects is never accepted anywhere else.
"""

import math
from dataclasses import dataclass
from numbers import Integral, Real

import numpy as np

from ..errors import BadParameter, InfeasibleDrift, NegativeProbability
from .base import PROB_TOL, Channel, DriftKind, DriftModel
from .rng import RngStream


@dataclass(frozen=True, kw_only=True)
class Deterministic(DriftModel):
    """Constant drift of ``d`` slots at every slot."""

    type: DriftKind = DriftKind.DETERMINISTIC
    d: int


@dataclass(frozen=True, kw_only=True)
class CategoricalPositive(DriftModel):
    """Drift k ∈ {1..K} with probability ``p`` each, zero drift otherwise."""

    type: DriftKind = DriftKind.POSITIVE
    K: int
    p: float

    def __post_init__(self) -> None:
        # p within PROB_TOL above 1/K is 1/K written with rounding error.
        K, p = self.K, self.p
        if isinstance(K, Integral) and not isinstance(K, bool) and K >= 1:
            if isinstance(p, Real) and not isinstance(p, bool):
                excess = K * float(p) - 1.0
                if 0.0 < excess <= PROB_TOL:
                    object.__setattr__(self, "p", 1.0 / K)

    @property
    def p_0(self) -> float:
        """Probability of zero drift, 1 − K·p (clamped at 0 within tolerance)."""
        return max(0.0, 1.0 - self.K * self.p)


@dataclass(frozen=True, kw_only=True)
class Ternary(DriftModel):
    """Drift k ∈ {−1, 0, 1} with probabilities (p_minus, p_0, p_1)."""

    type: DriftKind = DriftKind.TERNARY
    p_minus: float
    p_0: float
    p_1: float


def _unknown(model: object) -> BadParameter:
    return BadParameter(
        f"unknown drift model {model!r}", "model_type", {"model": repr(model)}
    )


def _require_finite(name: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise BadParameter(
            f"{name} must be a finite real number, got {value!r}",
            f"{name}_finite",
            {name: value},
        )
    return float(value)


def _require_int(name: str, value: object, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < minimum:
        raise BadParameter(
            f"{name} must be an integer >= {minimum}, got {value!r}",
            f"{name}_min",
            {name: value},
        )
    return int(value)


def _require_probability(name: str, value: object) -> float:
    prob = _require_finite(name, value)
    if prob < -PROB_TOL:
        raise NegativeProbability(
            f"{name} must be a probability in [0, 1], got {prob}",
            f"{name}_nonnegative",
            {name: prob},
        )
    if prob > 1.0 + PROB_TOL:
        raise InfeasibleDrift(
            f"{name} must be a probability in [0, 1], got {prob}",
            f"{name}_at_most_one",
            {name: prob},
        )
    return prob


def validate(model: DriftModel) -> DriftModel:
    """Check every invariant of a drift model.

    Args:
        model: Any drift model variant.

    Returns:
        The same model, so calls can be chained.

    Raises:
        BadParameter: d < 0, K < 1, non-integer or non-finite parameters.
        NegativeProbability: A probability below zero.
        InfeasibleDrift: Probabilities that cannot sum to one (e.g. K·p > 1).
    """
    match model:
        case Deterministic():
            _require_int("d", model.d, 0)
        case CategoricalPositive():
            K = _require_int("K", model.K, 1)
            p = _require_probability("p", model.p)
            p_0 = 1.0 - K * p
            if p_0 < -PROB_TOL:
                raise InfeasibleDrift(
                    f"infeasible: p_0 = 1 − Kp < 0 (K={K}, p={p:.9g}, p_0={p_0:.9g})",
                    "p0_nonnegative",
                    {"K": K, "p": p, "p_0": p_0},
                )
        case Ternary():
            values = {
                "p_minus": _require_probability("p_minus", model.p_minus),
                "p_0": _require_probability("p_0", model.p_0),
                "p_1": _require_probability("p_1", model.p_1),
            }
            total = sum(values.values())
            if abs(total - 1.0) > PROB_TOL:
                raise InfeasibleDrift(
                    f"infeasible: p_minus + p_0 + p_1 = {total:.12g} != 1",
                    "ternary_sum",
                    values | {"sum": total},
                )
        case _:
            raise _unknown(model)
    return model


def validate_channel(ch: Channel, require_positive: bool = True) -> Channel:
    """Check 0 <= p_s <= 1, and p_s > 0 unless ``require_positive`` is False.

    Raises:
        BadParameter: Non-finite p_s, or p_s = 0 where a finite mean is needed.
        NegativeProbability: p_s < 0.
        InfeasibleDrift: p_s > 1.
    """
    p_s = _require_probability("p_s", ch.p_s)
    if require_positive and p_s <= 0.0:
        raise BadParameter(
            "p_s must be positive: the average AoI is infinite when no update is ever decoded",
            "p_s_positive",
            {"p_s": p_s},
        )
    return ch


def drift_support(model: DriftModel) -> tuple[int, ...]:
    """Drift values in the fixed category order (−1, 0, 1, …, K)."""
    match model:
        case Deterministic():
            return (model.d,)
        case CategoricalPositive():
            return tuple(range(model.K + 1))
        case Ternary():
            return (-1, 0, 1)
    raise _unknown(model)


def drift_pmf(model: DriftModel) -> dict[int, float]:
    """Exact per-slot pmf of δ(t), keyed in category order."""
    validate(model)
    match model:
        case Deterministic():
            return {model.d: 1.0}
        case CategoricalPositive():
            pmf = {0: model.p_0}
            pmf.update({k: float(model.p) for k in range(1, model.K + 1)})
            return pmf
        case Ternary():
            return {-1: float(model.p_minus), 0: float(model.p_0), 1: float(model.p_1)}
    raise _unknown(model)


def drift_probability(model: DriftModel, k: int) -> float:
    """P[δ = k], zero outside the support."""
    return drift_pmf(model).get(k, 0.0)


def mean_drift(model: DriftModel) -> float:
    """E[δ] in slots."""
    validate(model)
    match model:
        case Deterministic():
            return float(model.d)
        case CategoricalPositive():
            return model.p * model.K * (model.K + 1) / 2.0
        case Ternary():
            return float(model.p_1) - float(model.p_minus)
    raise _unknown(model)


def inverse_cdf(model: DriftModel) -> tuple[np.ndarray, np.ndarray]:
    pmf = drift_pmf(model)
    support = np.fromiter(pmf.keys(), dtype=np.int64)
    probs = np.fromiter(pmf.values(), dtype=np.float64)
    cdf = np.cumsum(probs)
    # Close the CDF at the last category with mass so rounding never selects
    # a zero-probability category.
    last = int(np.flatnonzero(probs > 0.0)[-1])
    cdf[last:] = 1.0
    return support, cdf


def sample_drifts(model: DriftModel, rng: RngStream, n: int) -> np.ndarray:
    """``n`` i.i.d. drift draws by inverse CDF, one uniform per draw."""
    support, cdf = inverse_cdf(model)
    return apply_inverse_cdf(support, cdf, rng.uniforms(n))


def apply_inverse_cdf(support: np.ndarray, cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return support[np.minimum(idx, len(support) - 1)]


def sample_drift(model: DriftModel, rng: RngStream) -> int:
    """One i.i.d. draw of δ(t); advances ``rng`` by exactly one uniform."""
    return int(sample_drifts(model, rng, 1)[0])
