"""
Three-way comparison of one grid point: closed form, simulation and Markov-chain oracle.
"""

import logging
from collections.abc import Iterable
from dataclasses import replace
from typing import Any

from .core import Channel, DriftKind, model_label, validate, validate_channel
from .engines.analytic import aoi_pmf, avg_aoi, p_max
from .engines.dtmc import build_chain, mean_aoi, stationary
from .engines.sim import empirical_pmf_distance, run
from .errors import InfeasibleDrift
from .results import ALL_ENGINES, ComparisonRow, Engine, GridPoint, RowStatus

logger = logging.getLogger(__name__)

# Agreement required between the closed form and the Markov-chain oracle.
DTMC_TOL = 1e-6
SIM_SIGMAS = 3.0
SIM_REL_TOL = 0.01


def sim_agrees(mean_sim: float, std_error: float, reference: float) -> bool:
    """|mean_sim − reference| <= 3·std_error + 1% of the reference."""
    return abs(mean_sim - reference) <= SIM_SIGMAS * std_error + SIM_REL_TOL * reference


def classify(row: ComparisonRow) -> tuple[RowStatus, str]:
    """Status of a filled-in row and a note naming every failed check."""
    failures = []
    if row.mean_analytic is not None and row.mean_sim is not None:
        assert row.sim_std_error is not None
        if not sim_agrees(row.mean_sim, row.sim_std_error, row.mean_analytic):
            failures.append(
                f"sim {row.mean_sim:.6f} vs analytic {row.mean_analytic:.6f} "
                f"(se {row.sim_std_error:.2e})"
            )
    if row.mean_analytic is not None and row.mean_dtmc is not None:
        if abs(row.mean_dtmc - row.mean_analytic) > DTMC_TOL:
            failures.append(f"dtmc {row.mean_dtmc:.9f} vs analytic {row.mean_analytic:.9f}")
    if row.mean_analytic is None and row.mean_sim is not None and row.mean_dtmc is not None:
        assert row.sim_std_error is not None
        if not sim_agrees(row.mean_sim, row.sim_std_error, row.mean_dtmc):
            failures.append(f"sim {row.mean_sim:.6f} vs dtmc {row.mean_dtmc:.6f}")
    if row.th is not None and row.mean_sim is not None:
        assert row.sim_std_error is not None
        if row.mean_sim > row.th + SIM_SIGMAS * row.sim_std_error:
            failures.append(f"sim {row.mean_sim:.6f} above threshold {row.th:g}")
    if failures:
        return RowStatus.MISMATCH, "; ".join(failures)
    return RowStatus.OK, ""


def compare_point(
    point: GridPoint,
    n_slots: int,
    seed: int,
    engines: Iterable[Engine] = ALL_ENGINES,
) -> ComparisonRow:
    """
    Run the selected engines on one grid point and classify the outcome.

    A positive-drift point with a threshold ``th`` and no ``p`` is evaluated
    at p = p_max(K, p_s, th).

    Args:
        point: Grid point.
        n_slots: Simulated slots.
        seed: Seed of this point's simulation.
        engines: Engines to run.

    Returns:
        ComparisonRow; infeasible drift parameters give status ``infeasible``
        instead of an error.

    Raises:
        AoiDriftError: Any parameter error other than infeasible drift.
    """
    engines = frozenset(engines)
    ch = validate_channel(Channel(p_s=point.ps))
    values: dict[str, Any] = {}

    if point.family == DriftKind.POSITIVE and point.th is not None:
        assert point.K is not None
        values["p_max"] = p_max(point.K, ch, point.th)
        if point.p is None:
            point = replace(point, p=values["p_max"])

    model = point.model()
    try:
        validate(model)
    except InfeasibleDrift as e:
        logger.warning(f"infeasible grid point {point}: {e.message}")
        return ComparisonRow.from_point(
            point, status=RowStatus.INFEASIBLE, note=e.message, **values
        )

    label = model_label(model)
    pmf = None
    if Engine.ANALYTIC in engines:
        values["mean_analytic"] = avg_aoi(model, ch)
        pmf = aoi_pmf(model, ch)
    if Engine.SIM in engines:
        stats = run(model, ch, n_slots, seed)
        values["mean_sim"] = stats.mean_aoi
        values["sim_std_error"] = stats.std_error
        if pmf is not None:
            values["tv_distance"] = empirical_pmf_distance(stats, pmf)
    if Engine.DTMC in engines:
        values["mean_dtmc"] = mean_aoi(stationary(build_chain(model, ch))).value

    row = ComparisonRow.from_point(point, **values)
    row.status, row.note = classify(row)
    if row.status == RowStatus.MISMATCH:
        logger.warning(f"mismatch at {label} p_s={point.ps:g}: {row.note}")
    else:
        logger.debug(f"ok at {label} p_s={point.ps:g}")
    return row