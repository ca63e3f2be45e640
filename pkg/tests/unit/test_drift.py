"""
Tests for drift models, validation, sampling and number formatting.
"""

import math

import numpy as np
import pytest

from aoi_drift.core import (
    CategoricalPositive,
    Channel,
    Deterministic,
    RngStream,
    Ternary,
    build_model,
    drift_pmf,
    drift_probability,
    drift_support,
    format_number,
    mean_drift,
    model_label,
    sample_drift,
    sample_drifts,
    validate,
    validate_channel,
)
from aoi_drift.core.base import DriftKind
from aoi_drift.errors import BadParameter, InfeasibleDrift, NegativeProbability


def test_validate_returns_model(any_model):
    assert validate(any_model) is any_model


@pytest.mark.parametrize(
    "model,error,constraint",
    [
        (CategoricalPositive(K=2, p=0.6), InfeasibleDrift, "p0_nonnegative"),
        (CategoricalPositive(K=4, p=0.8), InfeasibleDrift, "p0_nonnegative"),
        (CategoricalPositive(K=0, p=0.1), BadParameter, "K_min"),
        (CategoricalPositive(K=2, p=-0.1), NegativeProbability, "p_nonnegative"),
        (Deterministic(d=-1), BadParameter, "d_min"),
        (Ternary(p_minus=0.5, p_0=0.5, p_1=0.5), InfeasibleDrift, "ternary_sum"),
        (Ternary(p_minus=-0.2, p_0=0.7, p_1=0.5), NegativeProbability, "p_minus_nonnegative"),
    ],
)
def test_validate_rejects(model, error, constraint):
    """Each violated invariant raises its own error with the constraint name."""
    with pytest.raises(error) as excinfo:
        validate(model)
    assert excinfo.value.constraint == constraint


def test_infeasible_message_names_constraint():
    with pytest.raises(InfeasibleDrift) as excinfo:
        validate(CategoricalPositive(K=4, p=0.8))
    assert excinfo.value.message.startswith("infeasible: p_0 = 1 − Kp < 0")
    assert excinfo.value.values["K"] == 4


def test_boundary_probability_is_feasible():
    """K·p = 1 leaves p_0 = 0, which is still a distribution."""
    model = validate(CategoricalPositive(K=4, p=0.25))
    assert model.p_0 == 0.0
    assert sum(drift_pmf(model).values()) == pytest.approx(1.0)


def test_validate_channel():
    assert validate_channel(Channel(p_s=1.0)).p_f == 0.0
    with pytest.raises(BadParameter):
        validate_channel(Channel(p_s=0.0))
    assert validate_channel(Channel(p_s=0.0), require_positive=False).p_f == 1.0
    with pytest.raises(InfeasibleDrift):
        validate_channel(Channel(p_s=1.5))
    with pytest.raises(NegativeProbability):
        validate_channel(Channel(p_s=-0.1))
    with pytest.raises(BadParameter):
        validate_channel(Channel(p_s=float("nan")))


def test_drift_pmf_and_support(positive_model, ternary_model):
    assert drift_support(positive_model) == (0, 1, 2)
    assert drift_pmf(positive_model) == pytest.approx({0: 0.4, 1: 0.3, 2: 0.3})
    assert drift_support(ternary_model) == (-1, 0, 1)
    assert drift_probability(ternary_model, -1) == 0.2
    assert drift_probability(ternary_model, 5) == 0.0
    assert drift_pmf(Deterministic(d=2)) == {2: 1.0}


def test_mean_drift(deterministic_model, positive_model, ternary_model):
    assert mean_drift(deterministic_model) == 3.0
    assert mean_drift(positive_model) == pytest.approx(0.9)
    assert mean_drift(ternary_model) == pytest.approx(0.1)


def test_sample_drifts_stays_in_support(any_model):
    draws = sample_drifts(any_model, RngStream(7), 10_000)
    assert set(np.unique(draws)) <= set(drift_support(any_model))


@pytest.mark.parametrize("K", [1, 3, 7, 10, 49])
def test_p_just_above_one_over_K_snaps(K):
    model = validate(CategoricalPositive(K=K, p=(1.0 / K) * (1.0 + 4e-13)))
    assert model.p == 1.0 / K
    assert abs(math.fsum(drift_pmf(model).values()) - 1.0) <= np.finfo(float).eps


def test_p_beyond_tolerance_is_not_snapped():
    model = CategoricalPositive(K=4, p=0.25 * (1.0 + 1e-9))
    assert model.p > 0.25
    with pytest.raises(InfeasibleDrift):
        validate(model)


def test_sample_drifts_frequencies(any_model):
    """10^6 draws: every category frequency within 4 standard errors."""
    n = 1_000_000
    draws = sample_drifts(any_model, RngStream(11), n)
    for k, prob in drift_pmf(any_model).items():
        freq = float(np.mean(draws == k))
        assert abs(freq - prob) <= 4.0 * math.sqrt(prob * (1.0 - prob) / n), k


def test_zero_probability_category_never_drawn():
    model = CategoricalPositive(K=4, p=0.25)
    draws = sample_drifts(model, RngStream(3), 50_000)
    assert not np.any(draws == 0)


def test_block_and_scalar_draws_agree(ternary_model):
    """A block of n draws equals n single draws from the same seed."""
    block = sample_drifts(ternary_model, RngStream(42), 20)
    rng = RngStream(42)
    singles = [sample_drift(ternary_model, rng) for _ in range(20)]
    assert block.tolist() == singles


def test_build_model():
    assert build_model("deterministic", d=2) == Deterministic(d=2)
    assert build_model("positive", K=3, p=0.1) == CategoricalPositive(K=3, p=0.1)
    assert build_model("ternary", pm=0.1, p0=0.8, p1=0.1).type == DriftKind.TERNARY
    with pytest.raises(BadParameter, match="requires --p"):
        build_model("positive", K=3)
    with pytest.raises(BadParameter, match="unknown model family"):
        build_model("lognormal")


def test_model_label(positive_model):
    assert model_label(positive_model) == "positive K=2 p=0.3"


@pytest.mark.parametrize(
    "value,text",
    [
        (3.0, "3.0"),
        (1 / 3, "0.333333333"),
        (2.1, "2.1"),
        (0.1 * 3, "0.3"),
        (12345.678912345, "12345.6789"),
        (7, "7"),
        (np.int64(4), "4"),
        (None, ""),
        (True, "true"),
        (DriftKind.POSITIVE, "positive"),
        ("note", "note"),
    ],
)
def test_format_number(value, text):
    assert format_number(value) == text
