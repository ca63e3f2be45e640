"""
Common test fixtures for the unit tests.

These fixtures are shared across all engine test files.
"""

import pytest

from aoi_drift.core import CategoricalPositive, Channel, Deterministic, Ternary


@pytest.fixture
def half_channel():
    """Channel decoding half of all updates."""
    return Channel(p_s=0.5)


@pytest.fixture
def deterministic_model():
    return Deterministic(d=3)


@pytest.fixture
def positive_model():
    return CategoricalPositive(K=2, p=0.3)


@pytest.fixture
def ternary_model():
    """Ternary drift whose (−1, 1) joint entry is 0.14 at p_s = 0.5."""
    return Ternary(p_minus=0.2, p_0=0.5, p_1=0.3)


@pytest.fixture(params=["deterministic", "positive", "ternary"])
def any_model(request, deterministic_model, positive_model, ternary_model):
    """Each drift model family in turn."""
    return {
        "deterministic": deterministic_model,
        "positive": positive_model,
        "ternary": ternary_model,
    }[request.param]
