"""Transfer matrices T(E, y, x) of -y'' + V(x, omega x + theta) y = E y."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from cocycle.integrator import MAX_STEP, block_propagators, schroedinger_coefficients
from cocycle.sl2 import SL2, matrix_norm
from core.exceptions import PreconditionError, StepSizeError
from core.logging_config import get_logger
from frequency import Frequency
from potential import PotentialSpec, breakpoint_crossings

LOGGER = get_logger(__name__)

MAX_INTERVAL_LENGTH = 1e4
DEFAULT_TOLERANCE = 1e-6
DEFAULT_STEP = 1e-3

_DET_FAULT: Optional[float] = None


@dataclass(frozen=True)
class TransferRequest:
    """
    One transfer computation from y to x at energy E.

    ``phase`` shifts the quasi-periodic argument: the potential seen is
    V(t, omega t + phase). ``y`` and ``x`` may come in either order.
    """

    energy: float
    y: float
    x: float
    h: float = DEFAULT_STEP
    tolerance: float = DEFAULT_TOLERANCE
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < self.h <= MAX_STEP:
            raise PreconditionError(f"step h must lie in (0, {MAX_STEP:g}], got {self.h!r}")
        if not self.tolerance > 0:
            raise PreconditionError(f"tolerance must be positive, got {self.tolerance!r}")
        if not all(math.isfinite(v) for v in (self.energy, self.y, self.x, self.phase)):
            raise PreconditionError("energy, interval ends and phase must be finite")

    @property
    def length(self) -> float:
        return abs(self.x - self.y)

    def interval(self, y: float, x: float) -> "TransferRequest":
        """Same energy, step and phase over another interval."""
        return TransferRequest(self.energy, y, x, self.h, self.tolerance, self.phase)


@contextmanager
def inject_det_fault(factor: float) -> Iterator[None]:
    """Scale every unit-block propagator by ``factor`` while active (self-test hook)."""
    global _DET_FAULT
    previous = _DET_FAULT
    _DET_FAULT = factor
    LOGGER.warning(f"Determinant fault injected: block factor {factor!r}")
    try:
        yield
    finally:
        _DET_FAULT = previous


def potential_sampler(spec: PotentialSpec, freq: Frequency, energy: float, phase: float = 0.0):
    """x -> V(x, omega x + phase) - E, vectorised."""
    omega = freq.omega

    def sample(x: np.ndarray) -> np.ndarray:
        return spec(x, omega * x + phase) - energy

    return sample


def crossing_cutter(spec: PotentialSpec, freq: Frequency, *phases: float, align: bool = True):
    """(a, b) -> breakpoint crossings of every phase, plus x jumps, inside the block."""
    omega = freq.omega
    interior = spec.interior_breakpoints
    x_jumps = spec.x_breakpoints

    def cuts(a: float, b: float) -> np.ndarray:
        if not align:
            return np.empty(0)
        found = [breakpoint_crossings(interior, omega, a, b, offset=p) for p in phases]
        if x_jumps:
            found.append(breakpoint_crossings(x_jumps, 1.0, a, b))
        return np.concatenate(found) if found else np.empty(0)

    return cuts


def transfer(
    spec: PotentialSpec,
    freq: Frequency,
    req: TransferRequest,
    align_breakpoints: bool = True,
) -> SL2:
    """
    T(E, y, x): maps (u'(y), u(y)) to (u'(x), u(x)).

    Panels are split at every breakpoint crossing of omega t + phase (mod 1)
    when ``align_breakpoints`` is set, and the running product is
    renormalized once per unit length. The determinant is monitored
    through the tracked drift and never corrected.

    Raises:
        PreconditionError: If the interval is longer than MAX_INTERVAL_LENGTH.
        StepSizeError: If the determinant drift exceeds ``req.tolerance``.
        ScaleBudgetError: If breakpoint enumeration overflows.
    """
    if req.length > MAX_INTERVAL_LENGTH:
        raise PreconditionError(
            f"interval length {req.length:g} exceeds {MAX_INTERVAL_LENGTH:g}; split the request"
        )
    sample = potential_sampler(spec, freq, req.energy, req.phase)
    cuts = crossing_cutter(spec, freq, req.phase, align=align_breakpoints)

    current = np.eye(2)
    log_scale = 0.0
    drift = 0.0
    for block, block_log_det in block_propagators(
        req.y, req.x, req.h, cuts, lambda x: schroedinger_coefficients(sample(x))
    ):
        if _DET_FAULT is not None:
            block = block * _DET_FAULT
            block_log_det += 2.0 * math.log(_DET_FAULT)
        current = block @ current
        drift += block_log_det
        norm = matrix_norm(current)
        if not 1.0 <= norm <= 1e4:
            current = current / norm
            log_scale += math.log(norm)

    if abs(drift) > req.tolerance:
        raise StepSizeError(drift, req.h)
    return SL2(tuple(float(v) for v in current.ravel()), log_scale, drift).renormalized()


def transfer_batch(
    spec: PotentialSpec,
    freq: Frequency,
    requests: Sequence[TransferRequest],
    threads: Optional[int] = None,
    align_breakpoints: bool = True,
) -> list[SL2]:
    """Evaluate many requests concurrently; results follow request order."""
    if threads is not None and threads < 1:
        raise PreconditionError(f"threads must be >= 1, got {threads}")
    if threads == 1 or len(requests) <= 1:
        return [transfer(spec, freq, r, align_breakpoints) for r in requests]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: transfer(spec, freq, r, align_breakpoints), requests))


__all__ = [
    "DEFAULT_STEP",
    "DEFAULT_TOLERANCE",
    "MAX_INTERVAL_LENGTH",
    "TransferRequest",
    "crossing_cutter",
    "inject_det_fault",
    "potential_sampler",
    "transfer",
    "transfer_batch",
]
