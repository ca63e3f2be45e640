"""
Closed-form AoI statistics for the three drift models.

Every distribution returned here is an enumerated prefix up to ``i_max``
plus the geometric tail it ends in, so masses and means beyond the
truncation index are summed in closed form.
"""

import logging
import math
from numbers import Real
from typing import Optional

import numpy as np

from ..core import (
    TAIL_EPS,
    TRUNCATION_CAP,
    CategoricalPositive,
    Channel,
    Deterministic,
    DriftModel,
    Ternary,
    drift_support,
    validate,
    validate_channel,
)
from ..errors import BadParameter, TruncationTooSmall
from ..results import AoiPmf, EntryDiscrepancy, GeometricTail, JointStationary

logger = logging.getLogger(__name__)


def _powers(p_f: float, exponents: np.ndarray) -> np.ndarray:
    """p_f**e where e >= 0 and 0 elsewhere; 0**0 evaluates to 1."""
    return np.where(exponents >= 0, np.power(p_f, np.maximum(exponents, 0)), 0.0)


def _aoi_axis(i_max: int) -> np.ndarray:
    return np.arange(1, i_max + 1, dtype=np.int64)


def support_offset(model: DriftModel) -> int:
    """Largest AoI below which the stationary pmf is not yet geometric (d, K or 1)."""
    match model:
        case Deterministic():
            return model.d
        case CategoricalPositive():
            return model.K
        case Ternary():
            return 1
    raise BadParameter(f"unknown drift model {model!r}", "model_type")


def min_i_max(model: DriftModel) -> int:
    """Smallest truncation index the Markov chain of ``model`` can be built with."""
    return support_offset(model) + 3


def tail_length(ch: Channel) -> int:
    """Smallest g with p_f**g < TAIL_EPS, capped at TRUNCATION_CAP."""
    p_f = ch.p_f
    if p_f <= 0.0:
        return 1
    g = max(1, math.floor(math.log(TAIL_EPS) / math.log(p_f)) + 1)
    while g > 1 and p_f ** (g - 1) < TAIL_EPS:
        g -= 1
    while p_f**g >= TAIL_EPS and g < TRUNCATION_CAP:
        g += 1
    return min(g, TRUNCATION_CAP)


def default_i_max(model: DriftModel, ch: Channel) -> int:
    """Default truncation index: support offset plus tail length, at least ``min_i_max``."""
    validate(model)
    validate_channel(ch)
    return max(support_offset(model) + tail_length(ch), min_i_max(model))


def _resolve_i_max(model: DriftModel, ch: Channel, i_max: Optional[int], floor: int) -> int:
    floor = max(floor, 1)
    if i_max is None:
        return default_i_max(model, ch)
    if isinstance(i_max, bool) or not isinstance(i_max, int) or i_max < floor:
        raise TruncationTooSmall(
            f"i_max={i_max} cannot hold the non-geometric support (need i_max >= {floor})",
            i_max=i_max if isinstance(i_max, int) else -1,
            required=floor,
        )
    return i_max


# ---- deterministic drift ----------------------------------------------------


def avg_aoi_deterministic(d: int, ch: Channel) -> float:
    """
    Average AoI under a constant drift of ``d`` slots: d + 1/p_s.

    Raises:
        BadParameter: If p_s = 0 or d is not a nonnegative integer.
    """
    validate(Deterministic(d=d))
    validate_channel(ch)
    return d + 1.0 / ch.p_s


def aoi_pmf_deterministic(d: int, ch: Channel, i_max: Optional[int] = None) -> AoiPmf:
    """
    AoI pmf under constant drift: zero up to ``d``, then p_s·p_f^(i−d−1).

    Args:
        d: Drift in slots.
        ch: Erasure channel with p_s > 0.
        i_max: Truncation index; defaults to ``default_i_max``.

    Returns:
        AoiPmf with a geometric tail starting at d + 1.
    """
    model = validate(Deterministic(d=d))
    validate_channel(ch)
    n = _resolve_i_max(model, ch, i_max, d)
    i = _aoi_axis(n)
    prefix = ch.p_s * _powers(ch.p_f, i - d - 1)
    return AoiPmf(prefix=prefix, tail=GeometricTail(start=d + 1, head=ch.p_s, ratio=ch.p_f))


def joint_stationary_deterministic(
    d: int, ch: Channel, i_max: Optional[int] = None
) -> JointStationary:
    """Single-row joint table: drift is always ``d``."""
    pmf = aoi_pmf_deterministic(d, ch, i_max)
    return JointStationary(
        support=(d,),
        table=pmf.prefix.reshape(1, -1).copy(),
        row_tails=(pmf.tail,),
    )


# ---- categorical positive drift ---------------------------------------------


def joint_stationary_positive(
    model: CategoricalPositive, ch: Channel, i_max: Optional[int] = None
) -> JointStationary:
    """
    Joint stationary distribution over drift k ∈ {0..K} and AoI i.

    π(0, i) = p_0·p_s·p_f^(i−1) for i >= 1 and π(k, i) = p·p_s·p_f^(i−k−1)
    for 1 <= k <= min(K, i−1); every other entry is zero.

    Raises:
        BadParameter, InfeasibleDrift, NegativeProbability: Invalid model or channel.
    """
    validate(model)
    validate_channel(ch)
    n = _resolve_i_max(model, ch, i_max, model.K)
    i = _aoi_axis(n)
    p_s, p_f = ch.p_s, ch.p_f

    rows = [model.p_0 * p_s * _powers(p_f, i - 1)]
    tails = [GeometricTail(start=1, head=model.p_0 * p_s, ratio=p_f)]
    for k in range(1, model.K + 1):
        rows.append(model.p * p_s * _powers(p_f, i - k - 1))
        tails.append(GeometricTail(start=k + 1, head=model.p * p_s, ratio=p_f))

    return JointStationary(
        support=drift_support(model), table=np.vstack(rows), row_tails=tuple(tails)
    )


def aoi_pmf_positive(
    model: CategoricalPositive, ch: Channel, i_max: Optional[int] = None
) -> AoiPmf:
    """
    AoI pmf under categorical positive drift, in closed form:

        P[Δ = i] = p_0·p_s·p_f^(i−1) + p·(1 − p_f^m)·p_f^(i−1−m),  m = min(K, i−1)

    The tail is geometric from i = K + 1 on.
    """
    validate(model)
    validate_channel(ch)
    n = _resolve_i_max(model, ch, i_max, model.K)
    i = _aoi_axis(n)
    p_s, p_f, K, p = ch.p_s, ch.p_f, model.K, model.p

    m = np.minimum(K, i - 1)
    prefix = model.p_0 * p_s * _powers(p_f, i - 1) + p * (1.0 - _powers(p_f, m)) * _powers(
        p_f, i - 1 - m
    )
    head = model.p_0 * p_s * p_f**K + p * (1.0 - p_f**K)
    return AoiPmf(prefix=prefix, tail=GeometricTail(start=K + 1, head=head, ratio=p_f))


def avg_aoi_positive(model: CategoricalPositive, ch: Channel) -> float:
    """Average AoI under categorical positive drift: (2 + K(K+1)·p·p_s) / (2·p_s)."""
    validate(model)
    validate_channel(ch)
    return (2.0 + model.K * (model.K + 1) * model.p * ch.p_s) / (2.0 * ch.p_s)


def p_max(K: int, ch: Channel, aoi_threshold: float) -> float:
    """
    Largest per-value drift probability that keeps the average AoI at or below a threshold.

    Solves avg_aoi_positive(K, p) <= aoi_threshold for p and clamps the result
    to the feasible range [0, 1/K].

    Args:
        K: Largest drift value, K >= 1.
        ch: Erasure channel with p_s > 0.
        aoi_threshold: Average AoI threshold in slots, > 0.

    Returns:
        max{0, min{1/K, 2(p_s·threshold − 1) / (K(K+1)·p_s)}}

    Raises:
        BadParameter: K < 1, p_s = 0 or a non-positive threshold.
    """
    validate(CategoricalPositive(K=K, p=0.0))
    validate_channel(ch)
    if (
        isinstance(aoi_threshold, bool)
        or not isinstance(aoi_threshold, Real)
        or not math.isfinite(aoi_threshold)
        or aoi_threshold <= 0
    ):
        raise BadParameter(
            f"AoI threshold must be a positive finite number, got {aoi_threshold!r}",
            "threshold_positive",
            {"th": aoi_threshold},
        )
    p_s = ch.p_s
    unclamped = 2.0 * (p_s * aoi_threshold - 1.0) / (K * (K + 1) * p_s)
    return max(0.0, min(1.0 / K, unclamped))


# ---- ternary drift ----------------------------------------------------------


def _ternary_f(model: Ternary, ch: Channel) -> float:
    return 1.0 - ch.p_s * (1.0 - model.p_minus)


def joint_stationary_ternary(
    model: Ternary, ch: Channel, i_max: Optional[int] = None
) -> JointStationary:
    """
    Joint stationary distribution over drift k ∈ {−1, 0, 1} and AoI i.

    With F = 1 − p_s(1 − p_{−1}):

    - π(−1, 1) = p_{−1}·p_s·(1 + p_f(1 − p_{−1})),
      π(−1, i) = p_{−1}·p_s·p_f^(i−1)·F for i >= 2
    - π(k, k+1) = p_k·p_s, π(k, k+2) = p_k·p_s·p_f(1 − p_{−1}),
      π(k, i) = p_k·p_s·p_f^(i−2−k)·F for i >= k+3, k ∈ {0, 1}

    The (−1, 1) entry is the value that makes the −1 row sum to p_{−1}; the
    reference table reads p_{−1}·p_s there. Both are kept in ``discrepancies``.
    """
    validate(model)
    validate_channel(ch)
    n = _resolve_i_max(model, ch, i_max, 3)
    i = _aoi_axis(n)
    p_s, p_f = ch.p_s, ch.p_f
    p_minus = model.p_minus
    F = _ternary_f(model, ch)

    minus_row = p_minus * p_s * _powers(p_f, i - 1) * F
    corrected = p_minus * p_s * (1.0 + p_f * (1.0 - p_minus))
    minus_row[0] = corrected
    rows = [minus_row]
    tails = [GeometricTail(start=2, head=p_minus * p_s * p_f * F, ratio=p_f)]

    for k, p_k in ((0, model.p_0), (1, model.p_1)):
        row = p_k * p_s * _powers(p_f, i - 2 - k) * F
        row[i <= k] = 0.0
        row[k] = p_k * p_s
        row[k + 1] = p_k * p_s * p_f * (1.0 - p_minus)
        rows.append(row)
        tails.append(GeometricTail(start=k + 3, head=p_k * p_s * p_f * F, ratio=p_f))

    discrepancy = EntryDiscrepancy(
        k=-1,
        i=1,
        literal=p_minus * p_s,
        implemented=corrected,
        note="reference value p_{-1}p_s leaves the -1 row short of p_{-1}; "
        "implemented value matches the pmf at i=1 and the Markov-chain solution",
    )
    logger.debug(
        f"ternary joint: pi(-1,1) literal={discrepancy.literal:.9g} "
        f"implemented={discrepancy.implemented:.9g}"
    )
    return JointStationary(
        support=drift_support(model),
        table=np.vstack(rows),
        row_tails=tuple(tails),
        discrepancies=(discrepancy,),
    )


def aoi_pmf_ternary(model: Ternary, ch: Channel, i_max: Optional[int] = None) -> AoiPmf:
    """
    AoI pmf under ternary drift, with F = 1 − p_s(1 − p_{−1}):

    - i = 1: p_0·p_s + p_{−1}·p_s·(1 + p_f(1 − p_{−1}))
    - i = 2: p_{−1}·p_s·p_f·F + p_0·p_s·p_f(1 − p_{−1}) + p_1·p_s
    - i = 3: p_{−1}·p_s·p_f²·F + p_0·p_s·p_f·F + p_1·p_s·p_f(1 − p_{−1})
    - i >= 4: p_s·F·p_f^(i−4)·(p_{−1}·p_f³ + p_0·p_f² + p_1·p_f)
    """
    validate(model)
    validate_channel(ch)
    n = _resolve_i_max(model, ch, i_max, 3)
    p_s, p_f = ch.p_s, ch.p_f
    pm, p0, p1 = model.p_minus, model.p_0, model.p_1
    F = _ternary_f(model, ch)

    head = p_s * F * (pm * p_f**3 + p0 * p_f**2 + p1 * p_f)
    tail = GeometricTail(start=4, head=head, ratio=p_f)
    prefix = np.empty(n, dtype=np.float64)
    prefix[0] = p0 * p_s + pm * p_s * (1.0 + p_f * (1.0 - pm))
    prefix[1] = pm * p_s * p_f * F + p0 * p_s * p_f * (1.0 - pm) + p1 * p_s
    prefix[2] = pm * p_s * p_f**2 * F + p0 * p_s * p_f * F + p1 * p_s * p_f * (1.0 - pm)
    if n > 3:
        prefix[3:] = head * _powers(p_f, _aoi_axis(n)[3:] - 4)
    return AoiPmf(prefix=prefix, tail=tail)


def avg_aoi_ternary(model: Ternary, ch: Channel) -> float:
    """Average AoI under ternary drift: p_1 + 1/p_s (independent of p_{−1})."""
    validate(model)
    validate_channel(ch)
    return model.p_1 + 1.0 / ch.p_s


# ---- dispatch ---------------------------------------------------------------


def aoi_pmf(model: DriftModel, ch: Channel, i_max: Optional[int] = None) -> AoiPmf:
    """Closed-form AoI pmf of any drift model."""
    validate(model)
    match model:
        case Deterministic():
            return aoi_pmf_deterministic(model.d, ch, i_max)
        case CategoricalPositive():
            return aoi_pmf_positive(model, ch, i_max)
        case Ternary():
            return aoi_pmf_ternary(model, ch, i_max)
    raise AssertionError("validate() admits only known drift models")


def joint_stationary(
    model: DriftModel, ch: Channel, i_max: Optional[int] = None
) -> JointStationary:
    """Closed-form joint stationary distribution of any drift model."""
    validate(model)
    match model:
        case Deterministic():
            return joint_stationary_deterministic(model.d, ch, i_max)
        case CategoricalPositive():
            return joint_stationary_positive(model, ch, i_max)
        case Ternary():
            return joint_stationary_ternary(model, ch, i_max)
    raise AssertionError("validate() admits only known drift models")


def avg_aoi(model: DriftModel, ch: Channel) -> float:
    """Closed-form average AoI of any drift model."""
    validate(model)
    match model:
        case Deterministic():
            return avg_aoi_deterministic(model.d, ch)
        case CategoricalPositive():
            return avg_aoi_positive(model, ch)
        case Ternary():
            return avg_aoi_ternary(model, ch)
    raise AssertionError("validate() admits only known drift models")

