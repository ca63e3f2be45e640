"""
Tests for the command-line front end: output formats, config files and exit codes.
"""

import csv
import io
import json

import pytest

from aoi_drift import compare
from aoi_drift.cli import build_parser, main, parse_engines
from aoi_drift.errors import BadParameter
from aoi_drift.results import ALL_ENGINES, Engine


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analytic_mean(capsys):
    code, out, _ = run(capsys, "analytic", "positive", "--K", "4", "--p", "0.1", "--ps", "0.5")
    assert code == 0
    assert out == "3.0\n"


def test_analytic_pmax(capsys):
    code, out, _ = run(capsys, "analytic", "pmax", "--K", "2", "--ps", "0.5", "--th", "3")
    assert code == 0
    assert out == "0.333333333\n"


def test_analytic_infeasible(capsys):
    code, out, err = run(
        capsys, "analytic", "positive", "--K", "4", "--p", "0.8", "--ps", "0.5", "--mean"
    )
    assert code == 2
    assert out == ""
    assert "infeasible: p_0 = 1 − Kp < 0" in err
    assert "constraint: p0_nonnegative" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("analytic", "positive", "--K", "4", "--p", "0.1"),
        ("analytic", "ternary", "--pm", "0.2", "--p0", "0.5", "--ps", "0.5"),
        ("analytic", "deterministic", "--d", "1", "--ps", "0"),
        ("analytic", "pmax", "--K", "2", "--ps", "0.5", "--th", "-1"),
        ("analytic", "deterministic", "--d", "5", "--ps", "0.5", "--pmf", "--imax", "2"),
        ("analytic", "positive", "--K", "x"),
        ("sweep-fig3", "--K", "1..", "--engines", "analytic"),
        ("sweep-fig3", "--engines", "oracle"),
        ("dtmc", "positive", "--K", "2", "--p", "0.3", "--ps", "0.5", "--imax", "3"),
        ("dtmc", "positive", "--K", "2", "--p", "0.3", "--ps", "0.5", "--imax", "200000"),
        ("nonsense",),
        (),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_analytic_pmf_json(capsys):
    code, out, _ = run(
        capsys, "analytic", "deterministic", "--d", "1", "--ps", "0.5", "--pmf",
        "--imax", "4", "--format", "json",
    )
    assert code == 0
    document = json.loads(out)
    assert [row["prob"] for row in document["rows"]] == [0.0, 0.5, 0.25, 0.125]
    assert document["residual"] == 0.125
    assert document["mean"] == 3.0


def test_analytic_joint_csv(capsys):
    code, out, _ = run(
        capsys, "analytic", "ternary", "--pm", "0.2", "--p0", "0.5", "--p1", "0.3",
        "--ps", "0.5", "--joint", "--imax", "5",
    )
    assert code == 0
    table = rows(out)
    assert table[0] == {"k": "-1", "i": "1", "pi": "0.14"}


def test_trace(capsys):
    code, out, _ = run(capsys, "trace-fig2")
    assert code == 0
    table = rows(out)
    assert [int(r["aoi"]) for r in table] == [1, 3, 2, 4, 2, 1]
    assert [int(r["aoi_nodrift"]) for r in table] == [1, 2, 3, 4, 1, 1]


def test_sweep_drift_growth(capsys):
    code, out, _ = run(
        capsys, "sweep-fig3", "--K", "1..8", "--p", "0.1,0,1", "--engines", "analytic"
    )
    assert code == 0
    table = rows(out)
    assert list(table[0]) == [
        "K", "p", "ps", "mean_analytic", "mean_sim", "sim_std_error", "mean_dtmc",
        "tv_distance", "status", "note",
    ]
    by_p = {p: [r for r in table if float(r["p"]) == p] for p in (0.0, 0.1, 1.0)}
    assert [r["mean_analytic"] for r in by_p[0.1]] == [
        "2.1", "2.3", "2.6", "3.0", "3.5", "4.1", "4.8", "5.6",
    ]
    assert {r["mean_analytic"] for r in by_p[0.0]} == {"2.0"}
    statuses = [r["status"] for r in by_p[1.0]]
    assert statuses == ["ok"] + ["infeasible"] * 7
    assert by_p[1.0][1]["mean_analytic"] == ""
    assert [float(r["p"]) for r in table] == sorted(float(r["p"]) for r in table)


def test_sweep_tolerance(capsys):
    code, out, _ = run(capsys, "sweep-fig4", "--K", "1..10", "--th", "3,5,8")
    assert code == 0
    table = rows(out)
    assert len(table) == 30
    assert table[0]["p_max"] == "1.0"
    assert table[1]["p_max"] == "0.333333333"
    for th in ("3.0", "5.0", "8.0"):
        column = [float(r["p_max"]) for r in table if r["th"] == th]
        assert column == sorted(column, reverse=True)


def test_sweep_csv_is_byte_stable(capsys):
    argv = ("sweep-fig3", "--K", "1..3", "--p", "0.1", "--slots", "3000", "--seed", "9")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert rows(first)[0]["mean_sim"] != ""


def test_out_path(capsys, tmp_path):
    path = tmp_path / "trace.json"
    code, out, _ = run(capsys, "trace-fig2", "--format", "json", "--out", str(path))
    assert code == 0
    assert out == ""
    assert [r["aoi_recursion"] for r in json.loads(path.read_text())["records"]] == [
        1, 3, 2, 4, 2, 1,
    ]


def test_simulate_json(capsys):
    code, out, _ = run(
        capsys, "simulate", "ternary", "--pm", "0.2", "--p0", "0.5", "--p1", "0.3",
        "--ps", "0.5", "--slots", "5000", "--seed", "4",
    )
    assert code == 0
    document = json.loads(out)
    assert document["n_slots"] == 5000
    assert document["seed"] == 4
    assert set(document) >= {"mean_aoi", "std_error", "empirical_pmf", "model"}


def test_simulate_trace_csv(capsys):
    code, out, _ = run(
        capsys, "simulate", "deterministic", "--d", "2", "--ps", "1", "--trace", "4",
        "--format", "csv",
    )
    assert code == 0
    assert [r["aoi"] for r in rows(out)] == ["1", "3", "3", "3"]


def test_dtmc_json_with_case_check(capsys):
    code, out, _ = run(
        capsys, "dtmc", "positive", "--K", "2", "--p", "0.3", "--ps", "0.5",
        "--method", "direct", "--format", "json", "--check-cases", "destination",
    )
    assert code == 0
    document = json.loads(out)
    assert document["mean"] == pytest.approx(2.9, abs=1e-8)
    assert document["case_mismatches"] == []
    assert document["method"] == "direct"


def test_dtmc_csv(capsys):
    code, out, _ = run(capsys, "dtmc", "deterministic", "--d", "0", "--ps", "0.5")
    assert code == 0
    table = rows(out)
    assert table[0] == {"k": "0", "i": "1", "pi": "0.5"}


def test_config_file(capsys, tmp_path):
    config = tmp_path / "point.conf"
    config.write_text("# anchor point\nK = 4\np = 0.1\nps = 0.25\n")
    code, out, _ = run(
        capsys, "analytic", "positive", "--config", str(config), "--ps", "0.5", "--mean"
    )
    assert code == 0
    assert out == "3.0\n"


@pytest.mark.parametrize("text", ["colour = red\n", "K = four\n", "K 4\n"])
def test_bad_config_exits_2(capsys, tmp_path, text):
    config = tmp_path / "bad.conf"
    config.write_text(text)
    code, _, err = run(capsys, "analytic", "positive", "--config", str(config))
    assert code == 2
    assert err


def test_missing_config_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "trace-fig2", "--config", str(tmp_path / "absent.conf"))
    assert code == 2


def test_verify_small_grid(capsys):
    code, out, _ = run(
        capsys, "verify", "--family", "deterministic", "--d", "0,1", "--ps", "0.5",
        "--engines", "analytic,dtmc",
    )
    assert code == 0
    document = json.loads(out)
    assert document["summary"] == {"total": 2, "ok": 2, "infeasible": 0, "mismatch": 0}


def test_verify_infeasible_is_not_a_mismatch(capsys):
    code, out, _ = run(
        capsys, "verify", "--family", "positive", "--K", "2", "--p", "0.6,0.3", "--ps", "0.5",
        "--engines", "analytic,dtmc",
    )
    assert code == 0
    statuses = [row["status"] for row in json.loads(out)["rows"]]
    assert statuses == ["infeasible", "ok"]


def test_verify_detects_tampered_closed_form(capsys, monkeypatch):
    monkeypatch.setattr(compare, "avg_aoi", lambda model, ch: 100.0)
    code, out, _ = run(
        capsys, "verify", "--family", "deterministic", "--d", "0", "--ps", "0.5",
        "--engines", "analytic,dtmc",
    )
    assert code == 1
    (row,) = json.loads(out)["rows"]
    assert row["status"] == "mismatch"
    assert row["note"].startswith("dtmc 2.000000000 vs analytic 100.000000000")


def test_parse_engines():
    assert parse_engines("all") == ALL_ENGINES
    assert parse_engines("analytic, sim") == {Engine.ANALYTIC, Engine.SIM}
    with pytest.raises(BadParameter):
        parse_engines("analytic,fast")


def test_every_subcommand_has_handler():
    parser = build_parser()
    for command in ("trace-fig2", "sweep-fig4"):
        assert callable(parser.parse_args([command]).handler)


def test_dtmc_chain_too_large(capsys):
    code, out, err = run(
        capsys, "dtmc", "positive", "--K", "2", "--p", "0.3", "--ps", "0.5", "--imax", "200000"
    )
    assert code == 2
    assert out == ""
    assert "constraint: chain_size" in err
