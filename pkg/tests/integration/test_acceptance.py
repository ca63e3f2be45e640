"""
Acceptance runs: closed forms, 10^6-slot simulation and the Markov-chain
oracle agree on the standard grid.

Run with ``pytest -m integration``; set AOI_DRIFT_WORKERS to spread the grid
over several processes.
"""

import asyncio
import logging
import os

import numpy as np
import pytest

from aoi_drift.compare import compare_point
from aoi_drift.core import CategoricalPositive, Channel, DriftKind, Ternary
from aoi_drift.engines import analytic, dtmc, sim
from aoi_drift.results import Engine, GridPoint, RowStatus, SweepSpec
from aoi_drift.sweep import drift_growth_grid, run_sweep, verify_grid

pytestmark = pytest.mark.integration

logger = logging.getLogger("aoi_drift_acceptance")

WORKERS = int(os.environ.get("AOI_DRIFT_WORKERS", "1"))
SEED = 1


def within_tolerance(row) -> bool:
    """|sim − analytic| <= max(3·std_error, 1% of analytic)."""
    gap = abs(row.mean_sim - row.mean_analytic)
    return gap <= max(3.0 * row.sim_std_error, 0.01 * row.mean_analytic)


@pytest.fixture(scope="module")
def grid_rows(n_slots):
    """Three-way comparison rows of the standard verification grid."""
    spec = SweepSpec(family="all", points=verify_grid(), n_slots=n_slots, seed=SEED)
    rows = asyncio.run(run_sweep(spec, workers=WORKERS))
    logger.info(f"verification grid: {len(rows)} rows")
    return rows


def rows_of(rows, family):
    return [row for row in rows if row.family == family]


@pytest.mark.parametrize("family", list(DriftKind))
def test_three_way_agreement(grid_rows, family):
    rows = rows_of(grid_rows, family)
    assert rows
    for row in rows:
        assert row.status == RowStatus.OK, row.note
        assert within_tolerance(row), row
        assert abs(row.mean_dtmc - row.mean_analytic) <= 1e-8, row


def test_distribution_distance(grid_rows):
    feasible = [row for row in grid_rows if row.status != RowStatus.INFEASIBLE]
    assert {row.ps for row in feasible} == {0.2, 0.5, 0.8}
    assert {row.family for row in feasible} == set(DriftKind)
    for row in feasible:
        assert row.tv_distance is not None, row
        assert row.tv_distance < 0.005, row


@pytest.mark.parametrize("K,p,expected", [(1, 1.0, 3.0), (4, 0.1, 3.0)])
def test_positive_anchors(n_slots, K, p, expected):
    row = compare_point(GridPoint(family=DriftKind.POSITIVE, K=K, p=p, ps=0.5), n_slots, SEED)
    assert row.mean_analytic == pytest.approx(expected, abs=1e-12)
    assert within_tolerance(row)
    assert abs(row.mean_dtmc - expected) <= 1e-8


def test_ternary_anchor(n_slots):
    point = GridPoint(family=DriftKind.TERNARY, pm=0.2, p0=0.5, p1=0.3, ps=0.5)
    row = compare_point(point, n_slots, SEED)
    assert row.mean_analytic == pytest.approx(2.3, abs=1e-12)
    assert within_tolerance(row)


def test_ternary_mean_independent_of_minus_drift(n_slots):
    """Common random numbers: only the drift categories move between runs."""
    ch = Channel(p_s=0.5)
    stats = [
        sim.run(Ternary(p_minus=pm, p_0=0.75 - pm, p_1=0.25), ch, n_slots, SEED)
        for pm in (0.0, 0.25, 0.5, 0.75)
    ]
    means = [s.mean_aoi for s in stats]
    assert max(means) - min(means) < 3.0 * max(s.std_error for s in stats)


def test_drift_growth_sweep():
    points = drift_growth_grid(range(1, 11), [0.1, 0.4, 0.8, 1.0], 0.5)
    analytic_only = frozenset({Engine.ANALYTIC})
    spec = SweepSpec(
        family="positive", points=points, n_slots=1, seed=SEED, engines=analytic_only
    )
    rows = asyncio.run(run_sweep(spec))
    infeasible = {(row.K, row.p) for row in rows if row.status == RowStatus.INFEASIBLE}
    assert infeasible == {(pt.K, pt.p) for pt in points if pt.K * pt.p > 1.0 + 1e-12}
    for p in (0.1, 0.4, 0.8, 1.0):
        means = [row.mean_analytic for row in rows if row.p == p and row.mean_analytic is not None]
        assert all(a < b for a, b in zip(means, means[1:]))


@pytest.mark.parametrize("th", [3.0, 5.0, 8.0])
@pytest.mark.parametrize("K", [1, 2, 4, 8])
def test_p_max_closed_loop(n_slots, K, th):
    ch = Channel(p_s=0.5)
    p_max = analytic.p_max(K, ch, th)
    at_limit = sim.run(CategoricalPositive(K=K, p=p_max), ch, n_slots, SEED)
    assert at_limit.mean_aoi <= th + 3.0 * at_limit.std_error

    if p_max < 1.0 / K:
        above = sim.run(CategoricalPositive(K=K, p=min(1.0 / K, 1.2 * p_max)), ch, n_slots, SEED)
        assert above.mean_aoi > th


def test_p_max_anchor():
    assert analytic.p_max(2, Channel(p_s=0.5), 3.0) == pytest.approx(1 / 3, abs=1e-12)


@pytest.mark.parametrize("ps", [0.2, 0.5, 0.8])
@pytest.mark.parametrize(
    "model",
    [
        CategoricalPositive(K=1, p=0.5),
        CategoricalPositive(K=4, p=0.125),
        Ternary(p_minus=0.25, p_0=0.5, p_1=0.25),
        Ternary(p_minus=0.5, p_0=0.0, p_1=0.5),
    ],
)
def test_joint_distribution(model, ps):
    ch = Channel(p_s=ps)
    sol = dtmc.stationary(dtmc.build_chain(model, ch))
    joint = analytic.joint_stationary(model, ch, sol.chain.i_max)
    assert np.max(np.abs(sol.table()[:, :-1] - joint.table[:, :-1])) <= 1e-8
    marginal = dtmc.aoi_marginal(sol).prefix
    closed_form = analytic.aoi_pmf(model, ch, sol.chain.i_max).prefix
    assert np.max(np.abs(marginal - closed_form)) <= 1e-8
    if isinstance(model, Ternary):
        (entry,) = joint.discrepancies
        assert sol.pi(-1, 1) == pytest.approx(entry.implemented, abs=1e-8)
        logger.info(f"(-1, 1) entry: literal {entry.literal:.9f}, oracle {sol.pi(-1, 1):.9f}")


def test_worked_trace():
    records = sim.run_trace(sim.EXAMPLE_MODEL, sim.EXAMPLE_SCHEDULE)
    assert [r.aoi for r in records] == [1, 3, 2, 4, 2, 1]
    assert [r.aoi_nodrift for r in records] == [1, 2, 3, 4, 1, 1]
