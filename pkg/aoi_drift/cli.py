"""
Command-line front end for aoi_drift.

Usage:
    aoi-drift analytic positive --K 4 --p 0.1 --ps 0.5 --mean
    aoi-drift analytic pmax --K 2 --ps 0.5 --th 3
    aoi-drift simulate ternary --pm 0.2 --p0 0.5 --p1 0.3 --ps 0.5 --slots 100000
    aoi-drift dtmc positive --K 2 --p 0.3 --ps 0.5 --format json
    aoi-drift sweep-fig3 --K 1..8 --p 0.1,0.4,0.8,1 --ps 0.5 --workers 4
    aoi-drift sweep-fig4 --K 1..10 --th 3,5,8 --ps 0.5
    aoi-drift trace-fig2
    aoi-drift verify --workers 4

Data goes to stdout (or ``--out``); logs go to stderr.

Exit codes:
    0  success
    1  verification found a mismatching row
    2  usage, parameter or I/O error
"""

import argparse
import asyncio
import dataclasses
import logging
import sys
from collections.abc import Sequence
from typing import Any, Optional

from .config import ConfigKeys, apply_config, load_config
from .core import (
    DEFAULT_SEED,
    DEFAULT_SLOTS,
    Channel,
    DriftKind,
    DriftModel,
    build_model,
    format_number,
    model_label,
    model_params,
    validate,
)
from .engines import analytic, dtmc, sim
from .errors import AoiDriftError, BadParameter, ModelError
from .results import ALL_ENGINES, Engine, RowStatus, SweepSpec
from .sinks import CsvSink, JsonSink, make_sink, open_output, write_document
from .sweep import (
    ALL_COLUMNS,
    deterministic_grid,
    drift_growth_grid,
    parse_float_list,
    parse_int_list,
    positive_grid,
    run_sweep,
    summarize,
    sweep_columns,
    ternary_grid,
    tolerance_grid,
    verify_grid,
)

logger = logging.getLogger(__name__)

FAMILIES = tuple(kind.value for kind in DriftKind)
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _require(args: argparse.Namespace, name: str) -> Any:
    value = getattr(args, name)
    if value is None:
        raise BadParameter(f"--{name} is required", f"{name}_required")
    return value


def _model(args: argparse.Namespace) -> DriftModel:
    return validate(
        build_model(args.family, d=args.d, K=args.K, p=args.p, pm=args.pm, p0=args.p0, p1=args.p1)
    )


def _channel(args: argparse.Namespace) -> Channel:
    return Channel(p_s=_require(args, "ps"))


def parse_engines(text: str) -> frozenset[Engine]:
    """Parse ``"analytic,sim,dtmc"`` (or ``"all"``) into engines."""
    if text.strip() == "all":
        return ALL_ENGINES
    try:
        return frozenset(Engine(part.strip()) for part in text.split(","))
    except ValueError as e:
        raise BadParameter(
            f"unknown engine in '{text}' (expected analytic, sim, dtmc)",
            "engines",
            {"engines": text},
        ) from e


def _scalar(args: argparse.Namespace, name: str, value: float, context: dict[str, Any]) -> None:
    with open_output(args.out) as stream:
        if (args.format or "csv") == "csv":
            stream.write(format_number(value) + "\n")
        else:
            write_document(stream, {"quantity": name, "value": value} | context)


def cmd_analytic(args: argparse.Namespace) -> int:
    """Closed-form mean, pmf prefix, joint table or p_max for one parameter point."""
    ch = _channel(args)
    if args.target == "pmax":
        K, th = _require(args, "K"), _require(args, "th")
        value = analytic.p_max(K, ch, th)
        _scalar(args, "p_max", value, {"K": K, "ps": ch.p_s, "th": th})
        return 0

    args.family = args.target
    model = _model(args)
    context = {"family": model.type.value, "ps": ch.p_s} | model_params(model)
    fmt = args.format or "csv"
    match args.quantity:
        case "mean":
            _scalar(args, "mean", analytic.avg_aoi(model, ch), context)
        case "pmf":
            pmf = analytic.aoi_pmf(model, ch, args.imax)
            with open_output(args.out) as stream, make_sink(fmt, stream, ("i", "prob")) as sink:
                for i, prob in pmf.as_dict().items():
                    sink.write({"i": i, "prob": prob})
                if isinstance(sink, JsonSink):
                    sink.summary = context | {"residual": pmf.residual, "mean": pmf.mean()}
        case "joint":
            joint = analytic.joint_stationary(model, ch, args.imax)
            with open_output(args.out) as stream, make_sink(fmt, stream, ("k", "i", "pi")) as sink:
                for row, k in enumerate(joint.support):
                    for i, value in enumerate(joint.table[row], start=1):
                        if value > 0.0:
                            sink.write({"k": k, "i": i, "pi": float(value)})
                if isinstance(sink, JsonSink):
                    sink.summary = context | {
                        "residual": joint.residual,
                        "discrepancies": [entry.to_dict() for entry in joint.discrepancies],
                    }
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    """Seeded Monte Carlo run: statistics, empirical pmf or a slot trace."""
    model, ch = _model(args), _channel(args)
    fmt = args.format or "json"
    if args.trace is not None:
        records = sim.simulate_records(model, ch, args.trace, args.seed, args.aoi_init)
        with open_output(args.out) as stream:
            if fmt == "csv":
                sim.write_trace_csv(records, stream)
            else:
                write_document(stream, {"records": [dataclasses.asdict(r) for r in records]})
        return 0

    stats = sim.run(model, ch, args.slots, args.seed, args.aoi_init)
    with open_output(args.out) as stream:
        if fmt == "csv":
            with CsvSink(stream, ("i", "frequency")) as sink:
                for i, freq in sorted(stats.empirical_pmf.items()):
                    sink.write({"i": i, "frequency": freq})
        else:
            context = {"model": model_label(model), "ps": ch.p_s}
            write_document(stream, context | stats.to_dict())
    return 0


def cmd_dtmc(args: argparse.Namespace) -> int:
    """Markov-chain oracle: stationary table or solver summary."""
    model, ch = _model(args), _channel(args)
    chain = dtmc.build_chain(model, ch, args.imax)
    sol = dtmc.stationary(chain, tol=args.tol, max_iter=args.max_iter, method=args.method)
    with open_output(args.out) as stream:
        if (args.format or "csv") == "csv":
            dtmc.write_stationary_csv(sol, stream)
            return 0
        mean = dtmc.mean_aoi(sol)
        document = {"model": model_label(model), "ps": ch.p_s} | sol.to_dict()
        document |= {"mean": mean.value, "residual_bound": mean.residual_bound}
        if args.check_cases is not None:
            mismatches = dtmc.case_table_check(chain, args.check_cases)
            document["case_reading"] = args.check_cases
            document["case_mismatches"] = [m.to_dict() for m in mismatches]
        write_document(stream, document)
    return 0


def _run_sweep(args: argparse.Namespace, spec: SweepSpec, columns: Sequence[str]) -> list:
    with open_output(spec.out) as stream, make_sink(spec.format, stream, columns) as sink:
        rows = asyncio.run(run_sweep(spec, sink, workers=args.workers))
        if isinstance(sink, JsonSink):
            sink.summary = {"summary": summarize(rows)}
    return rows


def cmd_sweep_fig3(args: argparse.Namespace) -> int:
    """Average AoI against K for several drift probabilities p."""
    points = drift_growth_grid(parse_int_list(args.K, "K"), parse_float_list(args.p, "p"), args.ps)
    spec = SweepSpec(
        family=DriftKind.POSITIVE.value,
        points=points,
        n_slots=args.slots,
        seed=args.seed,
        engines=parse_engines(args.engines),
        out=args.out,
        format=args.format or "csv",
    )
    _run_sweep(args, spec, sweep_columns(DriftKind.POSITIVE))
    return 0


def cmd_sweep_fig4(args: argparse.Namespace) -> int:
    """p_max against K for several AoI thresholds."""
    points = tolerance_grid(parse_int_list(args.K, "K"), parse_float_list(args.th, "th"), args.ps)
    spec = SweepSpec(
        family=DriftKind.POSITIVE.value,
        points=points,
        n_slots=args.slots,
        seed=args.seed,
        engines=parse_engines(args.engines),
        out=args.out,
        format=args.format or "csv",
    )
    _run_sweep(args, spec, sweep_columns(DriftKind.POSITIVE, threshold=True))
    return 0


def cmd_trace_fig2(args: argparse.Namespace) -> int:
    """Six-slot worked example with and without drift."""
    records = sim.run_trace(sim.EXAMPLE_MODEL, sim.EXAMPLE_SCHEDULE, aoi_init=1)
    with open_output(args.out) as stream:
        if (args.format or "csv") == "csv":
            sim.write_trace_csv(records, stream)
        else:
            write_document(stream, {"records": [dataclasses.asdict(r) for r in records]})
    return 0


def _verify_points(args: argparse.Namespace) -> tuple:
    if args.family is None:
        return verify_grid()
    ps_values = parse_float_list(args.ps, "ps")
    match args.family:
        case DriftKind.DETERMINISTIC.value:
            return deterministic_grid(parse_int_list(_require(args, "d"), "d"), ps_values)
        case DriftKind.POSITIVE.value:
            K_values = parse_int_list(_require(args, "K"), "K")
            return positive_grid(K_values, parse_float_list(_require(args, "p"), "p"), ps_values)
        case _:
            return ternary_grid(args.step, ps_values)


def cmd_verify(args: argparse.Namespace) -> int:
    """Three-way comparison over a grid; exit 1 if any row mismatches."""
    spec = SweepSpec(
        family=args.family or "all",
        points=_verify_points(args),
        n_slots=args.slots,
        seed=args.seed,
        engines=parse_engines(args.engines),
        out=args.out,
        format=args.format or "json",
    )
    rows = _run_sweep(args, spec, ALL_COLUMNS)
    summary = summarize(rows)
    logger.info(
        f"verify: {summary['ok']} ok, {summary['infeasible']} infeasible, "
        f"{summary['mismatch']} mismatch"
    )
    return 1 if any(row.status == RowStatus.MISMATCH for row in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common_keys = ConfigKeys()
    common_keys.add(common, "--config", help="file of 'key = value' defaults")
    common_keys.add(common, "--out", help="output path (default: stdout)")
    common_keys.add(common, "--format", choices=("csv", "json"), help="output format")
    common_keys.add(
        common,
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for INFO, -vv for DEBUG logs",
    )

    model_flags = argparse.ArgumentParser(add_help=False)
    model_keys = ConfigKeys()
    model_keys.add(model_flags, "--d", type=int, help="deterministic drift in slots")
    model_keys.add(model_flags, "--K", type=int, help="largest positive drift")
    model_keys.add(model_flags, "--p", type=float, help="probability of each drift 1..K")
    model_keys.add(model_flags, "--pm", type=float, help="ternary P[drift = -1]")
    model_keys.add(model_flags, "--p0", type=float, help="ternary P[drift = 0]")
    model_keys.add(model_flags, "--p1", type=float, help="ternary P[drift = 1]")
    model_keys.add(
        model_flags, "--ps", type=float, help="per-slot decoding success probability"
    )

    sim_flags = argparse.ArgumentParser(add_help=False)
    sim_keys = ConfigKeys()
    sim_keys.add(sim_flags, "--slots", type=int, default=DEFAULT_SLOTS, help="simulated slots")
    sim_keys.add(sim_flags, "--seed", type=int, default=DEFAULT_SEED, help="base seed")

    def sweep_flags(engines: str) -> tuple[argparse.ArgumentParser, ConfigKeys]:
        flags, keys = argparse.ArgumentParser(add_help=False), ConfigKeys()
        keys.add(
            flags,
            "--engines",
            default=engines,
            help=f"comma-separated engines (default: {engines})",
        )
        keys.add(flags, "--workers", type=int, default=1, help="worker processes")
        return flags, keys

    parser = argparse.ArgumentParser(
        prog="aoi-drift",
        description="Age of Information under clock drift: closed forms, simulation, DTMC oracle",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser(
        "analytic", parents=[common, model_flags], help="closed-form quantities"
    )
    keys = ConfigKeys(common_keys, model_keys)
    sub.add_argument("target", choices=FAMILIES + ("pmax",))
    keys.add(sub, "--th", type=float, help="average AoI threshold for pmax")
    keys.add(sub, "--imax", type=int, help="truncation index for --pmf/--joint")
    quantity = sub.add_mutually_exclusive_group()
    for const in ("mean", "pmf", "joint"):
        keys.add(quantity, f"--{const}", dest="quantity", action="store_const", const=const)
    sub.set_defaults(handler=cmd_analytic, subparser=sub, config_keys=keys, quantity="mean")

    sub = subparsers.add_parser(
        "simulate", parents=[common, model_flags, sim_flags], help="seeded Monte Carlo run"
    )
    keys = ConfigKeys(common_keys, model_keys, sim_keys)
    sub.add_argument("family", choices=FAMILIES)
    keys.add(sub, "--aoi-init", type=int, default=1, help="AoI at slot 1")
    keys.add(sub, "--trace", type=int, help="export the first N slot records instead")
    sub.set_defaults(handler=cmd_simulate, subparser=sub, config_keys=keys)

    sub = subparsers.add_parser(
        "dtmc", parents=[common, model_flags], help="Markov-chain stationary solution"
    )
    keys = ConfigKeys(common_keys, model_keys)
    sub.add_argument("family", choices=FAMILIES)
    keys.add(sub, "--imax", type=int, help="truncation index")
    keys.add(sub, "--method", choices=("power", "direct"), default="power")
    keys.add(sub, "--tol", type=float, default=dtmc.DEFAULT_TOL)
    keys.add(sub, "--max-iter", type=int, default=dtmc.DEFAULT_MAX_ITER)
    keys.add(
        sub,
        "--check-cases",
        choices=dtmc.CASE_READINGS,
        help="check the reference transition case tables (JSON output)",
    )
    sub.set_defaults(handler=cmd_dtmc, subparser=sub, config_keys=keys)

    sweep, sweep_keys = sweep_flags("analytic,sim,dtmc")
    sub = subparsers.add_parser(
        "sweep-fig3",
        parents=[common, sim_flags, sweep],
        help="average AoI as a function of K",
    )
    keys = ConfigKeys(common_keys, sim_keys, sweep_keys)
    keys.add(sub, "--K", default="1..10", help="K values, e.g. 1..8 or 1,2,4")
    keys.add(sub, "--p", default="0.1,0.4,0.8,1", help="drift probabilities")
    keys.add(sub, "--ps", type=float, default=0.5)
    sub.set_defaults(handler=cmd_sweep_fig3, subparser=sub, config_keys=keys)

    sweep, sweep_keys = sweep_flags("analytic")
    sub = subparsers.add_parser(
        "sweep-fig4",
        parents=[common, sim_flags, sweep],
        help="p_max as a function of K",
    )
    keys = ConfigKeys(common_keys, sim_keys, sweep_keys)
    keys.add(sub, "--K", default="1..10", help="K values, e.g. 1..10")
    keys.add(sub, "--th", default="3,5,8", help="average AoI thresholds")
    keys.add(sub, "--ps", type=float, default=0.5)
    sub.set_defaults(handler=cmd_sweep_fig4, subparser=sub, config_keys=keys)

    sub = subparsers.add_parser(
        "trace-fig2", parents=[common], help="six-slot worked example trace"
    )
    sub.set_defaults(handler=cmd_trace_fig2, subparser=sub, config_keys=ConfigKeys(common_keys))

    sweep, sweep_keys = sweep_flags("analytic,sim,dtmc")
    sub = subparsers.add_parser(
        "verify",
        parents=[common, sim_flags, sweep],
        help="three-way comparison over a grid",
    )
    keys = ConfigKeys(common_keys, sim_keys, sweep_keys)
    keys.add(
        sub, "--family", choices=FAMILIES, help="custom grid family (default: full grid)"
    )
    keys.add(sub, "--d", help="deterministic drifts, e.g. 0,1,5")
    keys.add(sub, "--K", help="K values, e.g. 1..4")
    keys.add(sub, "--p", help="drift probabilities")
    keys.add(sub, "--ps", default="0.2,0.5,0.8", help="success probabilities")
    keys.add(sub, "--step", type=float, default=0.25, help="ternary simplex step")
    sub.set_defaults(handler=cmd_verify, subparser=sub, config_keys=keys)

    return parser


def parse_args(
    parser: argparse.ArgumentParser, argv: Optional[Sequence[str]] = None
) -> argparse.Namespace:
    """Parse ``argv``; a ``--config`` file supplies defaults that flags override."""
    args = parser.parse_args(argv)
    if args.config:
        apply_config(args.subparser, args.config_keys, load_config(args.config), args.config)
        args = parser.parse_args(argv)
    return args


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parse_args(parser, argv)
        configure_logging(args.verbose)
        return args.handler(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except ModelError as e:
        print(f"error: {e.message} (constraint: {e.constraint})", file=sys.stderr)
        return 2
    except AoiDriftError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
