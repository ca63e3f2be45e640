"""
Parameter grids and sweep execution.

Rows of a sweep are independent: row ``n`` simulates with seed
``base XOR n``. Rows may finish in any order (and in worker processes),
but they are always emitted in grid order.
"""

import asyncio
import logging
from collections.abc import AsyncIterator, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from typing import Optional

from .compare import compare_point
from .core import MODEL_COLUMNS, DriftKind, derive_seed
from .errors import BadParameter
from .queue import ReorderQueue
from .results import ComparisonRow, GridPoint, SweepSpec
from .sinks import Sink

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ("mean_analytic", "mean_sim", "sim_std_error", "mean_dtmc", "tv_distance")
ALL_COLUMNS = (
    "family",
    "d",
    "K",
    "p",
    "pm",
    "p0",
    "p1",
    "ps",
    "th",
    "p_max",
    *RESULT_COLUMNS,
    "status",
    "note",
)

# Acceptance grid used by ``verify`` when no grid is given.
VERIFY_PS = (0.2, 0.5, 0.8)
VERIFY_D = (0, 1, 5)
VERIFY_K = (1, 2, 4)
SIMPLEX_STEP = 0.25


def sweep_columns(family: Optional[DriftKind], threshold: bool = False) -> tuple[str, ...]:
    """CSV columns of a sweep: model parameters, p_s, results, status."""
    if family is None:
        return ALL_COLUMNS
    head = MODEL_COLUMNS[family] + ("ps",)
    if threshold:
        head += ("th", "p_max")
    return head + RESULT_COLUMNS + ("status", "note")


def _malformed(name: str, text: str, error: ValueError) -> BadParameter:
    return BadParameter(f"malformed --{name} list '{text}': {error}", f"{name}_list", {name: text})


def parse_int_list(text: str, name: str = "K") -> list[int]:
    """Parse ``"1..8"``, ``"1,2,4"`` or a mix such as ``"1..3,8"``."""
    values: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                low, high = (int(bound) for bound in part.split(".."))
                if low > high:
                    raise ValueError(f"empty range {part.strip()}")
                values.extend(range(low, high + 1))
            else:
                values.append(int(part))
    except ValueError as e:
        raise _malformed(name, text, e) from e
    return values


def parse_float_list(text: str, name: str = "p") -> list[float]:
    """Parse a comma-separated list of reals."""
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise _malformed(name, text, e) from e


def drift_growth_grid(
    K_values: Iterable[int], p_values: Iterable[float], ps: float
) -> tuple[GridPoint, ...]:
    """Positive-drift points for every (p, K), sorted by p and then K."""
    return tuple(
        GridPoint(family=DriftKind.POSITIVE, K=K, p=p, ps=ps)
        for p, K in sorted(product(set(p_values), set(K_values)))
    )


def tolerance_grid(
    K_values: Iterable[int], thresholds: Iterable[float], ps: float
) -> tuple[GridPoint, ...]:
    """Positive-drift threshold points for every (threshold, K); p is left to p_max."""
    return tuple(
        GridPoint(family=DriftKind.POSITIVE, K=K, th=th, ps=ps)
        for th, K in sorted(product(set(thresholds), set(K_values)))
    )


def deterministic_grid(
    d_values: Iterable[int], ps_values: Iterable[float]
) -> tuple[GridPoint, ...]:
    return tuple(
        GridPoint(family=DriftKind.DETERMINISTIC, d=d, ps=ps)
        for d, ps in product(d_values, ps_values)
    )


def positive_grid(
    K_values: Iterable[int], p_values: Iterable[float], ps_values: Iterable[float]
) -> tuple[GridPoint, ...]:
    return tuple(
        GridPoint(family=DriftKind.POSITIVE, K=K, p=p, ps=ps)
        for K, p, ps in product(K_values, p_values, ps_values)
    )


def simplex_points(step: float) -> list[tuple[float, float, float]]:
    """Every (p_minus, p_0, p_1) on the probability simplex with the given step."""
    n = Fraction(1) / Fraction(step).limit_denominator(10_000)
    if n.denominator != 1 or n < 1:
        raise BadParameter(
            f"simplex step must divide 1, got {step}", "simplex_step", {"step": step}
        )
    count = int(n)
    return [
        (a / count, b / count, (count - a - b) / count)
        for a in range(count + 1)
        for b in range(count + 1 - a)
    ]


def ternary_grid(step: float, ps_values: Iterable[float]) -> tuple[GridPoint, ...]:
    return tuple(
        GridPoint(family=DriftKind.TERNARY, pm=pm, p0=p0, p1=p1, ps=ps)
        for (pm, p0, p1), ps in product(simplex_points(step), ps_values)
    )


def verify_grid() -> tuple[GridPoint, ...]:
    """
    Default verification grid.

    Deterministic d ∈ {0, 1, 5}; positive K ∈ {1, 2, 4} with p ∈ {0.1, 1/(2K), 1/K};
    ternary on the simplex with step 0.25; each for p_s ∈ {0.2, 0.5, 0.8}.
    """
    points = list(deterministic_grid(VERIFY_D, VERIFY_PS))
    for K in VERIFY_K:
        points += positive_grid([K], [0.1, 1.0 / (2 * K), 1.0 / K], VERIFY_PS)
    points += ternary_grid(SIMPLEX_STEP, VERIFY_PS)
    return tuple(points)


async def _produce(spec: SweepSpec, workers: int, queue: ReorderQueue[ComparisonRow]) -> None:
    async with queue:
        if workers <= 1:
            for index, point in enumerate(spec.points):
                row = compare_point(
                    point, spec.n_slots, derive_seed(spec.seed, index), spec.engines
                )
                await queue.put(index, row)
                await asyncio.sleep(0)
            return

        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers) as executor:

            async def one(index: int, point: GridPoint) -> None:
                try:
                    row = await loop.run_in_executor(
                        executor,
                        compare_point,
                        point,
                        spec.n_slots,
                        derive_seed(spec.seed, index),
                        spec.engines,
                    )
                except Exception:
                    logger.exception(f"row {index} failed in a worker process")
                    raise
                logger.debug(f"row {index} done")
                await queue.put(index, row)

            await asyncio.gather(*(one(index, point) for index, point in enumerate(spec.points)))


async def iter_rows(spec: SweepSpec, workers: int = 1) -> AsyncIterator[ComparisonRow]:
    """
    Yield the comparison rows of ``spec`` in grid order.

    Args:
        spec: Sweep description.
        workers: Worker processes; 1 runs every row in this process.

    Raises:
        AoiDriftError: Any row failing with a parameter or solver error.
    """
    queue = ReorderQueue[ComparisonRow]()
    producer = asyncio.create_task(_produce(spec, workers, queue))
    try:
        async for row in queue:
            yield row
    except GeneratorExit:
        producer.cancel()
        raise
    await producer


async def run_sweep(
    spec: SweepSpec, sink: Optional[Sink] = None, workers: int = 1
) -> list[ComparisonRow]:
    """Run every row of ``spec``, writing each to ``sink`` as soon as it is in order."""
    logger.info(
        f"sweep {spec.family}: {len(spec.points)} points, {spec.n_slots} slots, "
        f"engines={','.join(sorted(e.value for e in spec.engines))}, workers={workers}"
    )
    rows: list[ComparisonRow] = []
    async for row in iter_rows(spec, workers):
        rows.append(row)
        if sink is not None:
            sink.write(row.to_dict())
        logger.info(f"row {len(rows)}/{len(spec.points)}: {row.status.value}")
    return rows


def summarize(rows: Sequence[ComparisonRow]) -> dict[str, int]:
    """Row counts per status plus the total."""
    counts = {"total": len(rows), "ok": 0, "infeasible": 0, "mismatch": 0}
    for row in rows:
        counts[row.status.value] += 1
    return counts
