"""
Sweep and comparison result types.

This module defines grid points, the sweep description handed to the runner,
and the comparison row every sweep emits per grid point.
"""

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Any, Optional

from ..core import DriftKind, DriftModel, build_model
from ..errors import BadParameter


class RowStatus(str, Enum):
    """Outcome of a grid point."""

    OK = "ok"
    INFEASIBLE = "infeasible"
    MISMATCH = "mismatch"


class Engine(str, Enum):
    """Computation engines a sweep can run."""

    ANALYTIC = "analytic"
    SIM = "sim"
    DTMC = "dtmc"


ALL_ENGINES = frozenset(Engine)


@dataclass(frozen=True, kw_only=True)
class GridPoint:
    """One parameter point of a sweep; unset parameters are None."""

    family: DriftKind
    ps: float
    d: Optional[int] = None
    K: Optional[int] = None
    p: Optional[float] = None
    pm: Optional[float] = None
    p0: Optional[float] = None
    p1: Optional[float] = None
    th: Optional[float] = None

    def model(self) -> DriftModel:
        """Drift model of this point (constructed, not validated)."""
        return build_model(
            self.family.value, d=self.d, K=self.K, p=self.p, pm=self.pm, p0=self.p0, p1=self.p1
        )


@dataclass(kw_only=True)
class ComparisonRow:
    """Three-way comparison of one grid point.

    Engine columns that were not run stay None.
    """

    family: DriftKind
    ps: float
    d: Optional[int] = None
    K: Optional[int] = None
    p: Optional[float] = None
    pm: Optional[float] = None
    p0: Optional[float] = None
    p1: Optional[float] = None
    th: Optional[float] = None
    p_max: Optional[float] = None
    mean_analytic: Optional[float] = None
    mean_sim: Optional[float] = None
    sim_std_error: Optional[float] = None
    mean_dtmc: Optional[float] = None
    tv_distance: Optional[float] = None
    status: RowStatus = RowStatus.OK
    note: str = ""

    @classmethod
    def from_point(cls, point: GridPoint, **values: Any) -> "ComparisonRow":
        params = {f.name: getattr(point, f.name) for f in fields(point)}
        return cls(**params, **values)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["family"] = self.family.value
        data["status"] = self.status.value
        return data


@dataclass(frozen=True, kw_only=True)
class SweepSpec:
    """Everything a sweep needs to run and emit its rows.

    Raises:
        BadParameter: If the grid is empty or no engine is selected.
    """

    family: str
    points: tuple[GridPoint, ...]
    n_slots: int
    seed: int
    engines: frozenset[Engine] = field(default=ALL_ENGINES)
    out: Optional[str] = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if not self.points:
            raise BadParameter("sweep grid is empty", "grid_nonempty", {"family": self.family})
        if not self.engines:
            raise BadParameter("no engine selected", "engines_nonempty")
        if self.n_slots < 1:
            raise BadParameter(
                f"slots must be >= 1, got {self.n_slots}", "slots_min", {"slots": self.n_slots}
            )
