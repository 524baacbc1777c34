"""Near-periodicity defects of the transfer matrix at a resonant scale q.

With delta the signed fractional part of q*omega, the transfer over
[q, 2q] is the transfer over [0, q] seen at phase +delta, and the one over
[-q, 0] is the phase -delta one. The differences T - T_shifted solve

    Y' = A Y + (A - A_shifted) T_shifted,   Y(0) = 0,

so the pair (T_shifted, Y) is integrated as one 4x4 linear system. The
forcing only involves V(t, omega t) - V(t, omega t + delta), evaluated
through the model's difference hook, which keeps tiny defects accurate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np

from cocycle import (
    MAX_STEP,
    SL2,
    TransferRequest,
    block_propagators,
    crossing_cutter,
    matrix_norm,
    sl2_inverse,
    transfer,
)
from core.exceptions import PreconditionError, ScaleBudgetError, StepSizeError
from core.logging_config import get_logger
from frequency import Frequency, signed_shift
from potential import PotentialSpec

LOGGER = get_logger(__name__)

_LOG_LIMIT = 700.0
_DET_TOLERANCE = 1e-6


class DefectMethod(str, Enum):
    """How D1 and D2 are obtained."""

    PERTURBATIVE = "perturbative"
    DIRECT = "direct"


@dataclass(frozen=True)
class DefectPair:
    """D1 = ||T(0,q) - T(q,2q)||, D2 = ||T(0,-q) - T(0,q)^-1||."""

    q: int
    d1: float
    d2: float
    method: DefectMethod = DefectMethod.PERTURBATIVE

    @property
    def small(self) -> bool:
        return self.d1 <= 0.125 and self.d2 <= 0.125

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "D1": self.d1, "D2": self.d2, "method": self.method.value}


@dataclass(frozen=True)
class JointSolution:
    """
    e^{log_scale} * [[T_shifted], [T - T_shifted]] at the end of [0, q].

    ``top`` and ``bottom`` are the stored 2x2 halves.
    """

    top: np.ndarray
    bottom: np.ndarray
    log_scale: float
    det_drift: float = 0.0

    @property
    def full(self) -> np.ndarray:
        """Stored T = T_shifted + Y."""
        return self.top + self.bottom


def _exp_checked(log_value: float, q: int) -> float:
    if log_value > _LOG_LIMIT:
        raise ScaleBudgetError(
            f"defect at q={q} has log-size {log_value:.1f}, beyond double range", scale=q
        )
    return 0.0 if log_value == -math.inf else math.exp(log_value)


def _log(value: float) -> float:
    return -math.inf if value == 0.0 else math.log(value)


def joint_coefficients(spec: PotentialSpec, freq: Frequency, energy: float, phase: float):
    """x -> [[A_shifted, 0], [A - A_shifted, A]] with shape (n, 4, 4)."""
    omega = freq.omega

    def coefficients(x: np.ndarray) -> np.ndarray:
        y = omega * x
        w = spec(x, y) - energy
        w_shifted = spec(x, y + phase) - energy
        forcing = spec.difference(x, y, phase)
        out = np.zeros(x.shape + (4, 4))
        out[..., 0, 1] = w_shifted
        out[..., 1, 0] = 1.0
        out[..., 2, 1] = forcing
        out[..., 2, 3] = w
        out[..., 3, 2] = 1.0
        return out

    return coefficients


def joint_solution(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    q: int,
    phase: float,
    h: float,
) -> JointSolution:
    """Integrate the 4x4 system over [0, q], renormalizing by a scalar once per unit."""
    if not 0 < h <= MAX_STEP:
        raise PreconditionError(f"step h must lie in (0, {MAX_STEP:g}], got {h!r}")
    cuts = crossing_cutter(spec, freq, 0.0, phase)
    coefficients = joint_coefficients(spec, freq, energy, phase)

    current = np.eye(4)
    log_scale = 0.0
    drift = 0.0
    for block, block_log_det in block_propagators(0.0, float(q), h, cuts, coefficients):
        current = block @ current
        drift += block_log_det
        size = float(np.abs(current).max())
        if size > 1e4 or size < 1.0:
            current = current / size
            log_scale += math.log(size)

    # det of the stored top block is rounding noise once it is nearly rank one
    if abs(drift) > _DET_TOLERANCE:
        raise StepSizeError(drift, h)
    top, bottom = current[:2, :2], current[2:, :2]
    return JointSolution(top=top.copy(), bottom=bottom.copy(), log_scale=log_scale, det_drift=drift)


def _adjugate(a: np.ndarray) -> np.ndarray:
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])


def _perturbative(spec: PotentialSpec, freq: Frequency, energy: float, q: int, h: float) -> DefectPair:
    delta = signed_shift(freq, q)
    ahead = joint_solution(spec, freq, energy, q, delta, h)
    d1 = _exp_checked(ahead.log_scale + _log(matrix_norm(ahead.bottom)), q)

    # T_-^{-1} (T - T_-) T^{-1}; each factor is homogeneous of degree one
    behind = joint_solution(spec, freq, energy, q, -delta, h)
    core = _adjugate(behind.top) @ behind.bottom @ _adjugate(behind.full)
    d2 = _exp_checked(3.0 * behind.log_scale + _log(matrix_norm(core)), q)
    return DefectPair(q=q, d1=d1, d2=d2, method=DefectMethod.PERTURBATIVE)


def scaled_difference_norm(a: SL2, b: SL2, q: int = 0) -> float:
    """||e^{ls_a} N_a - e^{ls_b} N_b|| with the scales unwound against the larger one."""
    top = max(a.log_scale, b.log_scale)
    diff = math.exp(a.log_scale - top) * a.array - math.exp(b.log_scale - top) * b.array
    return _exp_checked(top + _log(matrix_norm(diff)), q)


def _direct(spec: PotentialSpec, freq: Frequency, energy: float, q: int, h: float) -> DefectPair:
    base = transfer(spec, freq, TransferRequest(energy, 0.0, float(q), h))
    ahead = transfer(spec, freq, TransferRequest(energy, float(q), 2.0 * q, h))
    behind = transfer(spec, freq, TransferRequest(energy, 0.0, -float(q), h))
    return DefectPair(
        q=q,
        d1=scaled_difference_norm(base, ahead, q),
        d2=scaled_difference_norm(behind, sl2_inverse(base), q),
        method=DefectMethod.DIRECT,
    )


def periodicity_defects(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    q: int,
    h: float = 1e-3,
    method: DefectMethod | str = DefectMethod.PERTURBATIVE,
) -> DefectPair:
    """
    D1 and D2 at scale q.

    The direct method subtracts independently integrated transfers and
    bottoms out at rounding level relative to ||T||; the perturbative one
    keeps relative accuracy for arbitrarily small defects.

    Raises:
        PreconditionError: If q < 1.
        ScaleBudgetError: If a defect is beyond double range.
        StepSizeError: If the determinant drifts.
    """
    if q < 1:
        raise PreconditionError(f"q must be >= 1, got {q}")
    method = DefectMethod(method)
    if method is DefectMethod.DIRECT:
        pair = _direct(spec, freq, energy, q, h)
    else:
        pair = _perturbative(spec, freq, energy, q, h)
    LOGGER.debug(f"Defects at q={q}, E={energy:g}: D1={pair.d1:.3e} D2={pair.d2:.3e} ({method.value})")
    return pair


__all__ = [
    "DefectMethod",
    "DefectPair",
    "JointSolution",
    "joint_coefficients",
    "joint_solution",
    "periodicity_defects",
    "scaled_difference_norm",
]
