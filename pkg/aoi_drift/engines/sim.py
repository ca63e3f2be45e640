"""
Seeded slot-level Monte Carlo simulator.

Each slot draws the drift δ(t) and then the channel outcome h(t) from one
uniform each, evolves the AoI by the model recursion and, in parallel, by a
two-clock timestamp view: the receiver reads its clock as t + δ(t) and keeps
the generation stamp of the freshest decoded update. The two views are
compared at every slot and any disagreement aborts the run.

Seeded runs start with synchronised clocks: slot 1 consumes its drift
uniform like every other slot, but δ(1) is zero (the fixed offset d under
deterministic drift) and Δ(1) is the initial AoI. Explicit trace schedules
are replayed as given.
"""

import csv
import logging
from collections.abc import Sequence
from numbers import Integral
from typing import Optional, TextIO

import numpy as np

from ..core import (
    HISTOGRAM_CAP,
    N_BATCHES,
    Channel,
    DriftModel,
    RngStream,
    StepFn,
    Ternary,
    apply_inverse_cdf,
    drift_support,
    inverse_cdf,
    model_label,
    recursion_for,
    step_nodrift,
    validate,
    validate_channel,
)
from ..errors import BadParameter, BadSchedule, ViewMismatch
from ..results import AoiPmf, RunStats, SlotRecord, TraceSchedule

logger = logging.getLogger(__name__)

# Slots simulated per block of uniforms.
BLOCK_SLOTS = 1 << 16

# Six-slot walkthrough under ternary drift, replayed from an initial AoI of 1.
EXAMPLE_SCHEDULE = TraceSchedule(h_seq=(1, 0, 0, 0, 1, 1), delta_seq=(0, 1, -1, 0, 1, 0))
EXAMPLE_MODEL = Ternary(p_minus=0.25, p_0=0.5, p_1=0.25)


def _require_positive_int(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 1:
        raise BadParameter(
            f"{name} must be an integer >= 1, got {value!r}", f"{name}_min", {name: value}
        )
    return int(value)


class _Evolution:
    """AoI state carried across blocks of slots."""

    def __init__(self, step: StepFn, aoi_init: int, record: bool = False):
        self.step = step
        self.aoi_init = aoi_init
        self.t = 0
        self.aoi = aoi_init
        self.drift = 0
        self.gen = 0
        self.nodrift = aoi_init
        self.records: Optional[list[SlotRecord]] = [] if record else None

    def advance(self, drifts: Sequence[int], hits: Sequence[bool]) -> list[int]:
        """Evolve over the given slots and return their AoI values.

        Raises:
            ViewMismatch: The recursion and timestamp views disagree.
        """
        step, aoi_init, records = self.step, self.aoi_init, self.records
        t, aoi, drift, gen, nodrift = self.t, self.aoi, self.drift, self.gen, self.nodrift
        out = []
        for k, h in zip(drifts, hits):
            t += 1
            rx = t + k
            if t == 1:
                aoi = nodrift = aoi_init
                gen = rx - aoi_init + 1
            else:
                aoi = step(aoi, drift, k, h)
                nodrift = step_nodrift(nodrift, h)
                if h:
                    # A generation stamp never runs ahead of the receiver's clock.
                    gen = min(t, rx)
            view = rx - gen + 1
            if view < 1:
                gen = rx
                view = 1
            if view != aoi:
                raise ViewMismatch(t, aoi, view)
            drift = k
            out.append(aoi)
            if records is not None:
                records.append(
                    SlotRecord(
                        t=t,
                        h=int(h),
                        delta=k,
                        aoi_recursion=aoi,
                        aoi_timestamp=view,
                        rx_time=rx,
                        gen_time=gen,
                        aoi_nodrift=nodrift,
                    )
                )
        self.t, self.aoi, self.drift, self.gen, self.nodrift = t, aoi, drift, gen, nodrift
        return out


def _simulate(
    model: DriftModel,
    ch: Channel,
    n_slots: int,
    seed: int,
    aoi_init: int,
    record: bool,
    require_positive: bool = True,
) -> tuple[np.ndarray, _Evolution]:
    validate(model)
    validate_channel(ch, require_positive=require_positive)
    n_slots = _require_positive_int("slots", n_slots)
    aoi_init = _require_positive_int("aoi_init", aoi_init)
    rng = RngStream(seed)

    support, cdf = inverse_cdf(model)
    start_drift = 0 if 0 in drift_support(model) else int(support[0])
    evolution = _Evolution(recursion_for(model), aoi_init, record)
    aois = np.empty(n_slots, dtype=np.int64)
    done = 0
    while done < n_slots:
        size = min(BLOCK_SLOTS, n_slots - done)
        u = rng.uniforms(2 * size)
        drifts = apply_inverse_cdf(support, cdf, u[0::2]).tolist()
        if done == 0:
            # Clocks start synchronised; the first drift uniform is still consumed.
            drifts[0] = start_drift
        hits = (u[1::2] < ch.p_s).tolist()
        aois[done : done + size] = evolution.advance(drifts, hits)
        done += size
    return aois, evolution


def _batch_std_error(aois: np.ndarray) -> tuple[float, int]:
    n_batches = min(N_BATCHES, len(aois))
    if n_batches < 2:
        return 0.0, n_batches
    batches = np.array_split(aois.astype(np.float64), n_batches)
    means = np.array([batch.mean() for batch in batches])
    return float(means.std(ddof=1) / np.sqrt(n_batches)), n_batches


def run(
    model: DriftModel, ch: Channel, n_slots: int, seed: int, aoi_init: int = 1
) -> RunStats:
    """
    Simulate ``n_slots`` slots and summarise the AoI sample path.

    Args:
        model: Any valid drift model.
        ch: Erasure channel.
        n_slots: Number of slots, >= 1.
        seed: 64-bit seed of the run's random stream.
        aoi_init: AoI pinned at slot 1.

    Returns:
        RunStats with the time-average AoI, empirical pmf and batch-means
        standard error. Identical arguments give identical results.

    Raises:
        ViewMismatch: The recursion and timestamp views disagree.
        BadParameter: p_s = 0, or an invalid slot count, seed or initial AoI.
    """
    logger.info(f"simulating {model_label(model)} p_s={ch.p_s:g}: {n_slots} slots, seed={seed}")
    aois, _ = _simulate(model, ch, n_slots, seed, aoi_init, record=False)

    counts = np.bincount(np.minimum(aois, HISTOGRAM_CAP + 1))
    n = len(aois)
    empirical = {int(i): float(c) / n for i, c in enumerate(counts[: HISTOGRAM_CAP + 1]) if c}
    overflow = float(counts[HISTOGRAM_CAP + 1]) / n if len(counts) > HISTOGRAM_CAP + 1 else 0.0
    if overflow:
        logger.warning(f"{overflow:.3e} of the slots exceed the histogram cap {HISTOGRAM_CAP}")

    std_error, n_batches = _batch_std_error(aois)
    stats = RunStats(
        n_slots=n,
        mean_aoi=float(aois.mean()),
        empirical_pmf=empirical,
        std_error=std_error,
        seed=seed,
        overflow=overflow,
        n_batches=n_batches,
    )
    logger.info(f"mean AoI {stats.mean_aoi:.6f} ± {stats.std_error:.2e}")
    return stats


def simulate_records(
    model: DriftModel, ch: Channel, n_slots: int, seed: int, aoi_init: int = 1
) -> list[SlotRecord]:
    """
    Same draws as ``run``, returned slot by slot.

    Unlike ``run`` this also accepts p_s = 0, where the AoI only ages.
    """
    _, evolution = _simulate(
        model, ch, n_slots, seed, aoi_init, record=True, require_positive=False
    )
    assert evolution.records is not None
    return evolution.records


def validate_schedule(model: DriftModel, schedule: TraceSchedule) -> TraceSchedule:
    """
    Check that a schedule can be replayed under ``model``.

    Raises:
        BadSchedule: Empty schedule, unequal lengths, outcomes other than 0/1
                     or drifts outside the model's support.
    """
    validate(model)
    if not schedule.h_seq:
        raise BadSchedule("trace schedule is empty")
    if len(schedule.h_seq) != len(schedule.delta_seq):
        raise BadSchedule(
            f"schedule lengths differ: {len(schedule.h_seq)} channel outcomes, "
            f"{len(schedule.delta_seq)} drifts"
        )
    bad_h = [h for h in schedule.h_seq if h not in (0, 1)]
    if bad_h:
        raise BadSchedule(f"channel outcomes must be 0 or 1, got {bad_h[0]!r}")
    support = drift_support(model)
    bad_delta = [delta for delta in schedule.delta_seq if delta not in support]
    if bad_delta:
        raise BadSchedule(
            f"drift {bad_delta[0]!r} is outside the {model.type.value} support {list(support)}"
        )
    return schedule


def run_trace(model: DriftModel, schedule: TraceSchedule, aoi_init: int = 1) -> list[SlotRecord]:
    """
    Replay the model recursion over an explicit schedule.

    Each record also carries the AoI the same channel outcomes give with
    synchronised clocks (``aoi_nodrift``).

    Raises:
        BadSchedule: Invalid schedule or initial AoI.
    """
    validate_schedule(model, schedule)
    if isinstance(aoi_init, bool) or not isinstance(aoi_init, Integral) or aoi_init < 1:
        raise BadSchedule(f"initial AoI must be an integer >= 1, got {aoi_init!r}")
    evolution = _Evolution(recursion_for(model), int(aoi_init), record=True)
    evolution.advance(
        [int(delta) for delta in schedule.delta_seq], [bool(h) for h in schedule.h_seq]
    )
    assert evolution.records is not None
    return evolution.records


def empirical_pmf_distance(stats: RunStats, pmf: AoiPmf) -> float:
    """
    Total-variation distance between an empirical AoI histogram and a pmf.

    The sum runs over the union of both supports; the pmf mass beyond it is
    paired with the histogram's overflow bucket.
    """
    top = max([pmf.i_max, *stats.empirical_pmf.keys()])
    empirical = np.zeros(top)
    for i, freq in stats.empirical_pmf.items():
        empirical[i - 1] = freq
    exact = np.array([pmf.prob(i) for i in range(1, top + 1)])
    rest = abs(stats.overflow - pmf.tail_mass(top))
    return 0.5 * (float(np.abs(empirical - exact).sum()) + rest)


def write_trace_csv(records: Sequence[SlotRecord], stream: TextIO) -> None:
    """Write slot records as CSV with columns ``t,h,delta,aoi,aoi_nodrift``."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "h", "delta", "aoi", "aoi_nodrift"])
    for record in records:
        writer.writerow([record.t, record.h, record.delta, record.aoi, record.aoi_nodrift])
