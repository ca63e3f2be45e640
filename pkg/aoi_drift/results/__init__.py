"""
Result types produced by the aoi_drift engines.

This package provides result classes organised by engine:
- base: AoI pmfs, joint stationary tables, geometric tails
- dtmc: transition matrices and stationary solutions
- sim: slot records, run statistics, trace schedules
- sweep: grid points, sweep descriptions, comparison rows
"""

from .base import AoiPmf, EntryDiscrepancy, GeometricTail, JointStationary
from .dtmc import AoiMean, CaseMismatch, JointState, StationarySolution, TransitionMatrix
from .sim import RunStats, SlotRecord, TraceSchedule
from .sweep import ALL_ENGINES, ComparisonRow, Engine, GridPoint, RowStatus, SweepSpec

__all__ = [
    "AoiPmf",
    "EntryDiscrepancy",
    "GeometricTail",
    "JointStationary",
    "AoiMean",
    "CaseMismatch",
    "JointState",
    "StationarySolution",
    "TransitionMatrix",
    "RunStats",
    "SlotRecord",
    "TraceSchedule",
    "ALL_ENGINES",
    "ComparisonRow",
    "Engine",
    "GridPoint",
    "RowStatus",
    "SweepSpec",
]
