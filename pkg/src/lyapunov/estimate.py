"""Phase-averaged finite-length Lyapunov exponents."""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from cocycle import DEFAULT_STEP, TransferRequest, log_norm, transfer
from core.exceptions import PreconditionError
from core.logging_config import get_context_logger, get_logger, log_timed_stage
from frequency import Frequency
from potential import PotentialSpec, builtin_model

LOGGER = get_logger(__name__)

DEFAULT_LENGTH = 200.0
DEFAULT_PHASES = 8
MIN_LENGTH = 10.0
# Reporting floor for L_hat; true exponents are non-negative
L_HAT_FLOOR = -1e-3
BURN_IN_FRACTION = 0.25


@dataclass(frozen=True)
class LyapunovEstimate:
    """L_hat at one energy with its spread over starting phases."""

    energy: float
    l_hat: float
    length: float
    n_phases: int
    stderr: float
    per_phase: tuple[float, ...]

    @property
    def spread(self) -> float:
        return max(self.per_phase) - min(self.per_phase)

    def to_row(self) -> Dict[str, Any]:
        return {
            "E": self.energy,
            "L_hat": self.l_hat,
            "stderr": self.stderr,
            "length": self.length,
            "n_phases": self.n_phases,
        }


def burn_in(length: float) -> float:
    return max(1.0, BURN_IN_FRACTION * length)


def _phase_growth(spec: PotentialSpec, freq: Frequency, energy: float, x0: float, length: float, h: float) -> float:
    # Growth after the burn-in window; the initial frame contributes O(1/length) otherwise
    warm = x0 + burn_in(length)
    head = transfer(spec, freq, TransferRequest(energy, x0, warm, h))
    tail = transfer(spec, freq, TransferRequest(energy, warm, warm + length, h))
    return (log_norm(tail @ head) - log_norm(head)) / length


def lyapunov(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    length: float = DEFAULT_LENGTH,
    n_phases: int = DEFAULT_PHASES,
    h: float = DEFAULT_STEP,
) -> LyapunovEstimate:
    """
    Mean over x0 = k / n_phases of the log-norm growth rate of T(E, x0, x0 + length).

    Raises:
        PreconditionError: If length < 10 or n_phases < 1.
    """
    if length < MIN_LENGTH:
        raise PreconditionError(f"length must be >= {MIN_LENGTH:g}, got {length!r}")
    if n_phases < 1:
        raise PreconditionError(f"n_phases must be >= 1, got {n_phases!r}")

    values = np.array(
        [_phase_growth(spec, freq, energy, k / n_phases, length, h) for k in range(n_phases)]
    )
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n_phases)) if n_phases > 1 else 0.0
    return LyapunovEstimate(
        energy=float(energy),
        l_hat=max(mean, L_HAT_FLOOR),
        length=float(length),
        n_phases=n_phases,
        stderr=stderr,
        per_phase=tuple(float(v) for v in values),
    )


def lyapunov_scan(
    spec: PotentialSpec,
    freq: Frequency,
    energies: Sequence[float],
    length: float = DEFAULT_LENGTH,
    n_phases: int = DEFAULT_PHASES,
    h: float = DEFAULT_STEP,
    threads: Optional[int] = None,
) -> list[LyapunovEstimate]:
    """
    One estimate per grid energy, in grid order whatever the thread count.

    Raises:
        PreconditionError: If the grid is empty or not sorted ascending.
    """
    grid = [float(e) for e in energies]
    if not grid:
        raise PreconditionError("energy grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise PreconditionError("energy grid must be sorted ascending")

    logger = get_context_logger(__name__, model=spec.label)
    started = time.perf_counter()

    def run(energy: float) -> LyapunovEstimate:
        estimate = lyapunov(spec, freq, energy, length, n_phases, h)
        logger.debug(f"E={energy:.6g} L_hat={estimate.l_hat:.6g} +- {estimate.stderr:.2g}")
        return estimate

    if threads == 1 or len(grid) == 1:
        results = [run(e) for e in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, grid))

    log_timed_stage(
        logger,
        "lyapunov_scan",
        (time.perf_counter() - started) * 1000,
        points=len(grid),
        length=length,
        n_phases=n_phases,
    )
    return results


# =============================================================================
# Growth-rate consistency
# =============================================================================

GROWTH_SLACK = 0.02
GROWTH_STDERR_FACTOR = 3.0


@dataclass(frozen=True)
class GrowthCheck:
    """Least-squares slope of log ||T(E, 0, x)|| against x, compared with L_hat."""

    energy: float
    lengths: tuple[float, ...]
    log_norms: tuple[float, ...]
    slope: float
    intercept: float
    residuals: tuple[float, ...]
    l_hat: float
    stderr: float

    @property
    def epsilon_check(self) -> float:
        return GROWTH_STDERR_FACTOR * self.stderr + GROWTH_SLACK

    @property
    def passed(self) -> bool:
        return self.slope <= self.l_hat + self.epsilon_check

    def to_dict(self) -> Dict[str, Any]:
        return {
            "energy": self.energy,
            "slope": self.slope,
            "intercept": self.intercept,
            "l_hat": self.l_hat,
            "epsilon_check": self.epsilon_check,
            "passed": self.passed,
        }


def growth_bound_check(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    lengths: Sequence[float],
    h: float = DEFAULT_STEP,
    estimate: Optional[LyapunovEstimate] = None,
) -> GrowthCheck:
    """
    Fit log ||T(E, 0, x)|| = slope * x + c over ``lengths``.

    Transfers are chained, so each extra length only integrates the new
    piece. Without ``estimate`` a default-parameter L_hat is computed.

    Raises:
        PreconditionError: Fewer than three lengths or not strictly increasing.
    """
    xs = [float(v) for v in lengths]
    if len(xs) < 3:
        raise PreconditionError("growth_bound_check needs at least three lengths")
    if any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] <= 0:
        raise PreconditionError("lengths must be positive and strictly increasing")

    logs = []
    position = 0.0
    running = None
    for x in xs:
        piece = transfer(spec, freq, TransferRequest(energy, position, x, h))
        running = piece if running is None else piece @ running
        position = x
        logs.append(log_norm(running))

    slope, intercept = np.polyfit(xs, logs, 1)
    residuals = np.asarray(logs) - (slope * np.asarray(xs) + intercept)
    if estimate is None:
        estimate = lyapunov(spec, freq, energy, h=h)
    return GrowthCheck(
        energy=float(energy),
        lengths=tuple(xs),
        log_norms=tuple(logs),
        slope=float(slope),
        intercept=float(intercept),
        residuals=tuple(float(r) for r in residuals),
        l_hat=estimate.l_hat,
        stderr=estimate.stderr,
    )


def coupling_scan(
    model: str,
    freq: Frequency,
    energy: float,
    couplings: Sequence[float],
    extra_params: Sequence[float] = (),
    table: Optional[np.ndarray] = None,
    length: float = DEFAULT_LENGTH,
    n_phases: int = DEFAULT_PHASES,
    h: float = DEFAULT_STEP,
    threads: Optional[int] = None,
) -> list[tuple[float, LyapunovEstimate]]:
    """L_hat at fixed E across coupling strengths lambda of one builtin family."""
    if not couplings:
        raise PreconditionError("coupling list is empty")
    specs = [builtin_model(model, [lam, *extra_params], table=table) for lam in couplings]

    def run(spec: PotentialSpec) -> LyapunovEstimate:
        return lyapunov(spec, freq, energy, length, n_phases, h)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        estimates = list(pool.map(run, specs))
    return [(float(lam), est) for lam, est in zip(couplings, estimates)]


__all__ = [
    "DEFAULT_LENGTH",
    "DEFAULT_PHASES",
    "L_HAT_FLOOR",
    "GrowthCheck",
    "LyapunovEstimate",
    "burn_in",
    "coupling_scan",
    "growth_bound_check",
    "lyapunov",
    "lyapunov_scan",
]
