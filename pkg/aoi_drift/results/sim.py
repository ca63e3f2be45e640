"""
Simulation result types.

This module defines per-slot records, run statistics and explicit
schedules replayed by the trace engine.
"""

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True)
class SlotRecord:
    """State of one simulated slot.

    Attributes:
        t: Slot index on the transmitter clock (1-based).
        h: Channel outcome, 1 when the update is decoded.
        delta: Drift δ(t) of the receiver clock in slots.
        aoi_recursion: AoI from the model recursion.
        aoi_timestamp: AoI from the two-clock timestamp view.
        rx_time: Receiver clock reading, t + δ(t).
        gen_time: Generation stamp of the freshest delivered update as held
                  by the receiver.
        aoi_nodrift: AoI the same channel outcomes give with synchronised clocks.
    """

    t: int
    h: int
    delta: int
    aoi_recursion: int
    aoi_timestamp: int
    rx_time: int
    gen_time: int
    aoi_nodrift: int

    @property
    def aoi(self) -> int:
        return self.aoi_recursion


@dataclass
class RunStats:
    """Monte Carlo output of one seeded run.

    Attributes:
        n_slots: Number of simulated slots.
        mean_aoi: Time-average AoI.
        empirical_pmf: Frequency of each AoI value up to the histogram cap.
        std_error: Batch-means standard error of ``mean_aoi``.
        seed: Seed of the run.
        overflow: Frequency of AoI values above the histogram cap.
        n_batches: Number of batches behind ``std_error``.
    """

    n_slots: int
    mean_aoi: float
    empirical_pmf: dict[int, float]
    std_error: float
    seed: int
    overflow: float = 0.0
    n_batches: int = 0

    def pmf_mean(self) -> float:
        """Frequency-weighted mean of the histogram."""
        return sum(i * freq for i, freq in self.empirical_pmf.items())

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["empirical_pmf"] = {str(i): f for i, f in sorted(self.empirical_pmf.items())}
        return data


@dataclass(frozen=True)
class TraceSchedule:
    """Explicit channel outcomes and drifts, one entry per slot."""

    h_seq: tuple[int, ...] = field(default_factory=tuple)
    delta_seq: tuple[int, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.h_seq)
