"""
Tests for grids, three-way comparison and sweep execution.
"""

import io

import pytest

from aoi_drift import compare
from aoi_drift.core import DriftKind
from aoi_drift.errors import BadParameter
from aoi_drift.results import ComparisonRow, Engine, GridPoint, RowStatus, SweepSpec
from aoi_drift.sinks import CsvSink
from aoi_drift.sweep import (
    drift_growth_grid,
    iter_rows,
    parse_float_list,
    parse_int_list,
    run_sweep,
    simplex_points,
    summarize,
    sweep_columns,
    tolerance_grid,
    verify_grid,
)

ANALYTIC = frozenset({Engine.ANALYTIC})


def test_parse_int_list():
    assert parse_int_list("1..3,8") == [1, 2, 3, 8]
    assert parse_int_list("4") == [4]


@pytest.mark.parametrize("text", ["1..", "a,b", "5..2", ""])
def test_parse_int_list_malformed(text):
    with pytest.raises(BadParameter) as excinfo:
        parse_int_list(text)
    assert excinfo.value.constraint == "K_list"


def test_parse_float_list():
    assert parse_float_list("0.1,1") == [0.1, 1.0]
    with pytest.raises(BadParameter):
        parse_float_list("0.1;0.2", "th")


def test_drift_growth_grid_order():
    points = drift_growth_grid([2, 1], [0.4, 0.1], 0.5)
    assert [(pt.p, pt.K) for pt in points] == [(0.1, 1), (0.1, 2), (0.4, 1), (0.4, 2)]


def test_tolerance_grid_leaves_p_open():
    points = tolerance_grid([1, 2], [5.0, 3.0], 0.5)
    assert [(pt.th, pt.K) for pt in points] == [(3.0, 1), (3.0, 2), (5.0, 1), (5.0, 2)]
    assert all(pt.p is None for pt in points)


def test_simplex_points():
    points = simplex_points(0.25)
    assert len(points) == 15
    assert all(sum(pt) == pytest.approx(1.0) for pt in points)
    with pytest.raises(BadParameter):
        simplex_points(0.3)


def test_verify_grid():
    points = verify_grid()
    families = [pt.family for pt in points]
    assert families.count(DriftKind.DETERMINISTIC) == 9
    assert families.count(DriftKind.POSITIVE) == 27
    assert families.count(DriftKind.TERNARY) == 45


def test_sweep_columns():
    assert sweep_columns(DriftKind.POSITIVE)[:3] == ("K", "p", "ps")
    assert sweep_columns(DriftKind.POSITIVE, threshold=True)[3:5] == ("th", "p_max")
    assert sweep_columns(None)[-2:] == ("status", "note")


def test_sweep_spec_rejects():
    with pytest.raises(BadParameter):
        SweepSpec(family="positive", points=(), n_slots=10, seed=1)
    point = GridPoint(family=DriftKind.DETERMINISTIC, d=0, ps=0.5)
    with pytest.raises(BadParameter):
        SweepSpec(family="deterministic", points=(point,), n_slots=10, seed=1, engines=frozenset())
    with pytest.raises(BadParameter):
        SweepSpec(family="deterministic", points=(point,), n_slots=0, seed=1)


def test_classify():
    row = ComparisonRow(
        family=DriftKind.DETERMINISTIC,
        ps=0.5,
        mean_analytic=3.0,
        mean_sim=3.02,
        sim_std_error=0.001,
        mean_dtmc=3.0,
    )
    assert compare.classify(row) == (RowStatus.OK, "")
    row.mean_sim = 3.2
    status, note = compare.classify(row)
    assert status == RowStatus.MISMATCH
    assert note.startswith("sim 3.200000 vs analytic 3.000000")
    row.mean_sim, row.mean_dtmc = 3.0, 3.00001
    assert compare.classify(row)[0] == RowStatus.MISMATCH


def test_compare_point_infeasible():
    point = GridPoint(family=DriftKind.POSITIVE, K=2, p=0.6, ps=0.5)
    row = compare.compare_point(point, 1_000, 1)
    assert row.status == RowStatus.INFEASIBLE
    assert row.note.startswith("infeasible: p_0 = 1 − Kp < 0")
    assert row.mean_analytic is None


def test_compare_point_uses_p_max():
    point = GridPoint(family=DriftKind.POSITIVE, K=2, th=3.0, ps=0.5)
    row = compare.compare_point(point, 1_000, 1, ANALYTIC)
    assert row.p_max == pytest.approx(1 / 3)
    assert row.p == pytest.approx(1 / 3)
    assert row.mean_analytic == pytest.approx(3.0)
    assert row.status == RowStatus.OK


def test_compare_point_all_engines():
    point = GridPoint(family=DriftKind.TERNARY, pm=0.25, p0=0.5, p1=0.25, ps=0.5)
    row = compare.compare_point(point, 100_000, 1)
    assert row.mean_dtmc == pytest.approx(2.25, abs=1e-8)
    assert row.tv_distance is not None
    assert row.tv_distance < 0.03
    assert row.status == RowStatus.OK


async def test_run_sweep_in_grid_order():
    points = drift_growth_grid([1, 2, 3], [0.1, 1.0], 0.5)
    spec = SweepSpec(family="positive", points=points, n_slots=10, seed=1, engines=ANALYTIC)
    out = io.StringIO()
    rows = await run_sweep(spec, CsvSink(out, sweep_columns(DriftKind.POSITIVE)))
    assert [(row.p, row.K) for row in rows] == [(pt.p, pt.K) for pt in points]
    assert [row.status for row in rows] == [RowStatus.OK] * 4 + [RowStatus.INFEASIBLE] * 2
    assert summarize(rows) == {"total": 6, "ok": 4, "infeasible": 2, "mismatch": 0}
    assert len(out.getvalue().splitlines()) == 7


async def test_worker_pool_keeps_order():
    points = drift_growth_grid(range(1, 7), [0.1], 0.5)
    spec = SweepSpec(
        family="positive",
        points=points,
        n_slots=2_000,
        seed=3,
        engines=frozenset({Engine.ANALYTIC, Engine.SIM}),
    )
    pooled = [row async for row in iter_rows(spec, workers=2)]
    serial = [row async for row in iter_rows(spec, workers=1)]
    assert [row.K for row in pooled] == list(range(1, 7))
    assert [row.mean_sim for row in pooled] == [row.mean_sim for row in serial]
