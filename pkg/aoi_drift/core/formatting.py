"""
Formatting utilities for drift models and output values.

"""

from enum import Enum
from numbers import Integral, Real
from typing import Any, Optional

import numpy as np

from ..errors import BadParameter
from .base import DriftKind, DriftModel
from .drift import CategoricalPositive, Deterministic, Ternary

# CSV parameter columns per model family, in output order.
MODEL_COLUMNS: dict[DriftKind, tuple[str, ...]] = {
    DriftKind.DETERMINISTIC: ("d",),
    DriftKind.POSITIVE: ("K", "p"),
    DriftKind.TERNARY: ("pm", "p0", "p1"),
}


def model_label(model: DriftModel) -> str:
    """Convert a drift model into a short, stable, human-readable label.

    Labels are used in log lines and reports. For example:
        - Deterministic(d=3) -> "deterministic d=3"
        - CategoricalPositive(K=2, p=0.3) -> "positive K=2 p=0.3"
        - Ternary(0.2, 0.5, 0.3) -> "ternary pm=0.2 p0=0.5 p1=0.3"

    Args:
        model: Any drift model variant.

    Returns:
        str: ``<family> key=value ...`` in the family's column order.
    """
    params = " ".join(f"{key}={value:g}" for key, value in model_params(model).items())
    return f"{model.type.value} {params}"


def model_params(model: DriftModel) -> dict[str, Any]:
    """Parameter columns of ``model`` keyed as in ``MODEL_COLUMNS``."""
    match model:
        case Deterministic():
            return {"d": model.d}
        case CategoricalPositive():
            return {"K": model.K, "p": model.p}
        case Ternary():
            return {"pm": model.p_minus, "p0": model.p_0, "p1": model.p_1}
    raise BadParameter(f"unknown drift model {model!r}", "model_type")


def build_model(
    family: str,
    d: Optional[int] = None,
    K: Optional[int] = None,
    p: Optional[float] = None,
    pm: Optional[float] = None,
    p0: Optional[float] = None,
    p1: Optional[float] = None,
) -> DriftModel:
    """Construct a drift model from family name and flag values.

    Only construction happens here; feasibility is checked by ``validate``.

    Raises:
        BadParameter: Unknown family or a flag required by the family is missing.
    """

    def need(name: str, value: Any) -> Any:
        if value is None:
            raise BadParameter(
                f"model family '{family}' requires --{name}",
                f"{name}_required",
                {"family": family},
            )
        return value

    match family:
        case DriftKind.DETERMINISTIC.value:
            return Deterministic(d=need("d", d))
        case DriftKind.POSITIVE.value:
            return CategoricalPositive(K=need("K", K), p=need("p", p))
        case DriftKind.TERNARY.value:
            return Ternary(p_minus=need("pm", pm), p_0=need("p0", p0), p_1=need("p1", p1))
        case _:
            raise BadParameter(
                f"unknown model family '{family}'", "model_family", {"family": family}
            )


def format_number(value: Any) -> str:
    """Render a value for CSV/JSON text output.

    Floats get 9 significant digits in positional notation (never exponent
    form), so identical inputs always produce identical bytes. Integers and
    strings pass through unchanged and None renders as an empty string.
    """
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case Enum():
            return str(value.value)
        case Integral():
            return str(int(value))
        case Real():
            return np.format_float_positional(
                float(value), precision=9, unique=False, fractional=False, trim="0"
            )
        case _:
            return str(value)
