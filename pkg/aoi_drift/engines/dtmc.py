"""
Markov-chain oracle for the joint drift/AoI process.

The chain over (δ, Δ) is generated from the same per-slot recursions the
simulator runs, truncated at ``i_max`` with an absorbing top bucket, and
solved numerically. It checks every closed form in the analytic engine
without sharing any of its algebra.
"""

import csv
import logging
from collections.abc import Callable
from typing import Optional, TextIO

import numpy as np

from ..core import (
    MAX_CHAIN_STATES,
    CategoricalPositive,
    Channel,
    Deterministic,
    DriftModel,
    Ternary,
    drift_pmf,
    format_number,
    recursion_for,
    validate,
    validate_channel,
)
from ..errors import BadParameter, NoConvergence, TruncationTooSmall
from ..results import (
    AoiMean,
    AoiPmf,
    CaseMismatch,
    JointState,
    StationarySolution,
    TransitionMatrix,
)
from .analytic import default_i_max, min_i_max

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000
# Largest acceptable bound on the mean bias caused by the top bucket.
MEAN_RESIDUAL_TOL = 1e-9

CASE_READINGS = ("literal", "destination")

# (label, value, condition over destination drift m, destination AoI n,
# source drift i and source AoI j)
type Case = tuple[str, float, Callable[[np.ndarray, np.ndarray, int, int], np.ndarray]]


def _row_start(model: DriftModel, k: int) -> int:
    """Smallest AoI reachable together with drift ``k``."""
    match model:
        case Deterministic():
            return model.d + 1
        case CategoricalPositive():
            return 1 if k == 0 else k + 1
        case Ternary():
            return 1 if k == -1 else k + 1
    raise BadParameter(f"unknown drift model {model!r}", "model_type")


def enumerate_states(model: DriftModel, i_max: int) -> tuple[JointState, ...]:
    """Recurrent states up to ``i_max``, ordered by drift then AoI."""
    return tuple(
        JointState(k, i)
        for k in drift_pmf(model)
        for i in range(_row_start(model, k), i_max + 1)
    )


def chain_size(model: DriftModel, i_max: int) -> int:
    """Number of states of the chain truncated at ``i_max``."""
    return sum(max(0, i_max - _row_start(model, k) + 1) for k in drift_pmf(model))


def build_chain(model: DriftModel, ch: Channel, i_max: Optional[int] = None) -> TransitionMatrix:
    """
    Build the truncated transition matrix of the joint (δ, Δ) chain.

    Each state (k_prev, i_prev) moves to (k, step(i_prev, k_prev, k, h)) with
    probability p_k·p_s for h = 1 and p_k·p_f for h = 0, where ``step`` is the
    model's AoI recursion. Destinations above ``i_max`` land in the top bucket.

    Args:
        model: Any valid drift model.
        ch: Erasure channel with p_s > 0.
        i_max: Truncation index; defaults to ``default_i_max(model, ch)``.

    Returns:
        TransitionMatrix with exact row sums.

    Raises:
        TruncationTooSmall: If ``i_max`` is below the model's minimum chain size.
        BadParameter: If the chain would exceed ``MAX_CHAIN_STATES`` states.
    """
    validate(model)
    validate_channel(ch)
    if i_max is None:
        i_max = default_i_max(model, ch)
    floor = min_i_max(model)
    if i_max < floor:
        raise TruncationTooSmall(
            f"i_max={i_max} is too small for the drift support (need i_max >= {floor})",
            i_max=i_max,
            required=floor,
        )
    size = chain_size(model, i_max)
    if size > MAX_CHAIN_STATES:
        raise BadParameter(
            f"i_max={i_max} gives a chain of {size} states, above the "
            f"{MAX_CHAIN_STATES}-state limit of the dense solver",
            "chain_size",
            {"i_max": i_max, "states": size, "limit": MAX_CHAIN_STATES},
        )

    step = recursion_for(model)
    pmf = drift_pmf(model)
    states = enumerate_states(model, i_max)
    index = {state: n for n, state in enumerate(states)}
    matrix = np.zeros((len(states), len(states)))

    for row, (k_prev, i_prev) in enumerate(states):
        for k, p_k in pmf.items():
            if p_k == 0.0:
                continue
            for success, p_h in ((True, ch.p_s), (False, ch.p_f)):
                if p_h == 0.0:
                    continue
                i = min(step(i_prev, k_prev, k, success), i_max)
                matrix[row, index[JointState(k, i)]] += p_k * p_h

    logger.debug(f"built chain with {len(states)} states (i_max={i_max})")
    return TransitionMatrix(model=model, channel=ch, states=states, matrix=matrix, i_max=i_max)


def _residual(chain: TransitionMatrix, vector: np.ndarray) -> float:
    return float(sum(v for state, v in zip(chain.states, vector) if state.i == chain.i_max))


def _power_iteration(
    chain: TransitionMatrix, tol: float, max_iter: int
) -> tuple[np.ndarray, int]:
    P = chain.matrix
    x = np.full(len(chain.states), 1.0 / len(chain.states))
    error = float("inf")
    for iteration in range(1, max_iter + 1):
        y = x @ P
        y /= y.sum()
        error = float(np.max(np.abs(y - x)))
        x = y
        if error <= tol:
            return x, iteration
    raise NoConvergence(max_iter, error, tol)


def _direct_solve(chain: TransitionMatrix) -> np.ndarray:
    n = len(chain.states)
    A = chain.matrix.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    x = np.linalg.solve(A, b)
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def stationary(
    matrix: TransitionMatrix,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: str = "power",
) -> StationarySolution:
    """
    Solve the balance equations πP = π, Σπ = 1.

    Args:
        matrix: Chain from ``build_chain``.
        tol: Bound on ‖πP − π‖∞ for power iteration.
        max_iter: Power-iteration budget.
        method: "power" (from the uniform vector) or "direct" (dense linear solve
                with the normalisation row).

    Raises:
        NoConvergence: Power iteration exhausted ``max_iter``.
        BadParameter: Unknown method.
    """
    match method:
        case "power":
            vector, iterations = _power_iteration(matrix, tol, max_iter)
        case "direct":
            vector, iterations = _direct_solve(matrix), 1
        case _:
            raise BadParameter(
                f"unknown solver method '{method}' (expected 'power' or 'direct')",
                "solver_method",
                {"method": method},
            )

    error = float(np.max(np.abs(vector @ matrix.matrix - vector)))
    solution = StationarySolution(
        chain=matrix,
        vector=vector,
        method=method,
        iterations=iterations,
        convergence_error=error,
        residual=_residual(matrix, vector),
    )
    logger.info(
        f"stationary solve ({method}): {iterations} iterations, "
        f"error={error:.3e}, top-bucket mass={solution.residual:.3e}"
    )
    return solution


def aoi_marginal(sol: StationarySolution) -> AoiPmf:
    """P[Δ = i] = Σ_k π(k, i) over the truncated support, normalised."""
    prefix = np.zeros(sol.chain.i_max)
    for state, value in zip(sol.chain.states, sol.vector):
        prefix[state.i - 1] += value
    return AoiPmf(prefix=prefix / prefix.sum(), tail=None, source="dtmc")


def mean_aoi(sol: StationarySolution) -> AoiMean:
    """
    Mean AoI over the truncated support, with a bound on the truncation bias.

    The bound is the top-bucket mass times 1/p_s plus the drift span, which
    dominates the expected excess of the AoI above ``i_max``.

    Raises:
        TruncationTooSmall: If the bound exceeds 1e-9.
    """
    pmf = aoi_marginal(sol)
    support = sol.chain.support
    span = support[-1] - support[0]
    bound = sol.residual * (1.0 / sol.chain.channel.p_s + span)
    if bound > MEAN_RESIDUAL_TOL:
        raise TruncationTooSmall(
            f"truncation bias bound {bound:.3e} exceeds {MEAN_RESIDUAL_TOL:g} "
            f"at i_max={sol.chain.i_max}; increase i_max",
            i_max=sol.chain.i_max,
            required=bound,
        )
    return AoiMean(value=pmf.mean(), residual_bound=bound)


def _positive_cases(
    model: CategoricalPositive, ch: Channel, reading: str
) -> list[Case]:
    p_0, p, p_s, p_f = model.p_0, model.p, ch.p_s, ch.p_f
    if reading == "literal":
        first = ("p0*ps if m=0, i=1", p_0 * p_s, lambda m, n, i, j: (m == 0) & (i == 1))
    else:
        first = ("p0*ps if m=0, n=1", p_0 * p_s, lambda m, n, i, j: (m == 0) & (n == 1))
    return [
        first,
        ("p*ps if m!=0, n=m+1", p * p_s, lambda m, n, i, j: (m != 0) & (n == m + 1)),
        ("p0*pf if m=0, n=j+1-i", p_0 * p_f, lambda m, n, i, j: (m == 0) & (n == j + 1 - i)),
        ("p*pf if m!=0, n=j+1+m-i", p * p_f, lambda m, n, i, j: (m != 0) & (n == j + 1 + m - i)),
    ]


def _ternary_cases(model: Ternary, ch: Channel) -> list[Case]:
    pm, p0, p1, p_s, p_f = model.p_minus, model.p_0, model.p_1, ch.p_s, ch.p_f
    # Cases without an explicit m take the drift implied by their coefficient.
    return [
        ("p-1 if m=-1, n=1, j=i+1", pm, lambda m, n, i, j: (m == -1) & (n == 1) & (j == i + 1)),
        (
            "p-1*ps if m=-1, n=1, j>=i+2",
            pm * p_s,
            lambda m, n, i, j: (m == -1) & (n == 1) & (j >= i + 2),
        ),
        ("p-1*pf if m=-1, n=j-i", pm * p_f, lambda m, n, i, j: (m == -1) & (n == j - i)),
        ("p0*ps if n=1", p0 * p_s, lambda m, n, i, j: (m == 0) & (n == 1)),
        ("p0*pf if m=0, n=j+1-i", p0 * p_f, lambda m, n, i, j: (m == 0) & (n == j + 1 - i)),
        ("p1*ps if m=1, n=2", p1 * p_s, lambda m, n, i, j: (m == 1) & (n == 2)),
        ("p1*pf if n=j+2-i", p1 * p_f, lambda m, n, i, j: (m == 1) & (n == j + 2 - i)),
    ]


def case_table_check(
    matrix: TransitionMatrix, reading: str = "destination", atol: float = 1e-12
) -> list[CaseMismatch]:
    """
    Compare the reference transition case tables with the generated chain.

    Cases are evaluated in their listed order and the first matching case
    supplies the table value; anything unmatched is zero. Only source rows
    whose destinations cannot reach the top bucket are compared.

    Args:
        matrix: Chain from ``build_chain`` for a positive or ternary model.
        reading: For positive drift, "literal" reads the first case as
                 conditioned on source drift i = 1, "destination" as
                 destination AoI n = 1. Ignored for ternary drift.
        atol: Absolute tolerance per entry.

    Returns:
        Every (source, destination) pair where the table and the chain differ.

    Raises:
        BadParameter: Deterministic model or unknown reading.
    """
    if reading not in CASE_READINGS:
        raise BadParameter(
            f"unknown case-table reading '{reading}' (expected one of {', '.join(CASE_READINGS)})",
            "case_reading",
            {"reading": reading},
        )
    model, ch = matrix.model, matrix.channel
    match model:
        case CategoricalPositive():
            cases = _positive_cases(model, ch, reading)
        case Ternary():
            cases = _ternary_cases(model, ch)
        case _:
            raise BadParameter(
                "no reference transition case table for deterministic drift",
                "case_table_model",
                {"model": model.type.value},
            )

    m = np.array([state.k for state in matrix.states])
    n = np.array([state.i for state in matrix.states])
    support = matrix.support
    span = support[-1] - support[0]
    labels = [label for label, _, _ in cases] + ["otherwise"]
    values = [value for _, value, _ in cases]

    mismatches = []
    for row, (i, j) in enumerate(matrix.states):
        if j + 1 + span >= matrix.i_max:
            continue
        conditions = [cond(m, n, i, j) for _, _, cond in cases]
        table = np.select(conditions, values, default=0.0)
        chosen = np.select(conditions, list(range(len(cases))), default=len(cases))
        generated = matrix.matrix[row]
        for col in np.flatnonzero(np.abs(table - generated) > atol):
            mismatches.append(
                CaseMismatch(
                    src=matrix.states[row],
                    dst=matrix.states[col],
                    generated=float(generated[col]),
                    table=float(table[col]),
                    case=labels[int(chosen[col])],
                )
            )

    logger.info(
        f"case table check ({model.type.value}, {reading}): {len(mismatches)} mismatching entries"
    )
    return mismatches


def write_stationary_csv(sol: StationarySolution, stream: TextIO) -> None:
    """Write the stationary vector as CSV rows ``k,i,pi`` in state order."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "i", "pi"])
    for state, value in zip(sol.chain.states, sol.vector):
        writer.writerow([state.k, state.i, format_number(float(value))])
