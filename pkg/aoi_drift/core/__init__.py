"""
Drift models, channel, recursions and random streams.

This package is the shared foundation of the toolkit. It exports:
- The drift model variants and the channel
- Validation, drift pmf/mean and inverse-CDF sampling
- The per-model AoI recursions used by the simulator and the Markov-chain oracle
- The seeded random stream
"""

from .base import (
    DEFAULT_SEED,
    DEFAULT_SLOTS,
    HISTOGRAM_CAP,
    MAX_CHAIN_STATES,
    N_BATCHES,
    PROB_TOL,
    TAIL_EPS,
    TRUNCATION_CAP,
    Channel,
    DriftKind,
    DriftModel,
)
from .drift import (
    CategoricalPositive,
    Deterministic,
    Ternary,
    drift_pmf,
    apply_inverse_cdf,
    drift_probability,
    drift_support,
    inverse_cdf,
    mean_drift,
    sample_drift,
    sample_drifts,
    validate,
    validate_channel,
)
from .formatting import MODEL_COLUMNS, build_model, format_number, model_label, model_params
from .recursion import (
    StepFn,
    recursion_for,
    step_deterministic,
    step_nodrift,
    step_positive,
    step_ternary,
)
from .rng import RngStream, derive_seed

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_SLOTS",
    "HISTOGRAM_CAP",
    "MAX_CHAIN_STATES",
    "N_BATCHES",
    "PROB_TOL",
    "TAIL_EPS",
    "TRUNCATION_CAP",
    "Channel",
    "DriftKind",
    "DriftModel",
    "CategoricalPositive",
    "Deterministic",
    "Ternary",
    "drift_pmf",
    "apply_inverse_cdf",
    "drift_probability",
    "drift_support",
    "inverse_cdf",
    "mean_drift",
    "sample_drift",
    "sample_drifts",
    "validate",
    "validate_channel",
    "MODEL_COLUMNS",
    "build_model",
    "format_number",
    "model_label",
    "model_params",
    "StepFn",
    "recursion_for",
    "step_deterministic",
    "step_nodrift",
    "step_positive",
    "step_ternary",
    "RngStream",
    "derive_seed",
]
