"""Log-slope fits for decay along a resonant ladder."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from core.exceptions import PreconditionError
from frequency import Frequency, ResonanceLadder
from gordon.defects import periodicity_defects
from lyapunov import LyapunovEstimate
from potential import PotentialSpec, drift_integral

# Absorbs the unknown multiplicative constant in front of the decay
SLOPE_SLACK = 0.1


def fit_log_slope(scales: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """
    Least-squares (slope, intercept) of ln(values) against scales.

    Raises:
        PreconditionError: Fewer than two points, or a non-positive value.
    """
    xs = np.asarray(scales, dtype=float)
    ys = np.asarray(values, dtype=float)
    if xs.size < 2 or xs.size != ys.size:
        raise PreconditionError("a log-slope fit needs at least two (scale, value) pairs")
    if np.any(~np.isfinite(ys)) or np.any(ys <= 0):
        raise PreconditionError("log-slope fit needs finite positive values")
    slope, intercept = np.polyfit(xs, np.log(ys), 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class DecayFit:
    """Fitted ln-slope of a per-scale quantity next to the rate it must not exceed."""

    quantity: str
    scales: tuple[int, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.slope <= self.bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "scales": list(self.scales),
            "values": list(self.values),
            "slope": self.slope,
            "bound": self.bound,
            "passed": self.passed,
        }


def _require_quasi_periodic(ladder: ResonanceLadder) -> None:
    if ladder.periodic or math.isinf(ladder.beta_hat):
        raise PreconditionError("decay fits need an irrational frequency")


def defect_decay_fit(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    ladder: ResonanceLadder,
    lyap: LyapunovEstimate,
    h: float = 1e-3,
) -> DecayFit:
    """ln D1 against the ladder scales; bound (L_hat - gamma beta_hat) + 2 eps + slack."""
    _require_quasi_periodic(ladder)
    scales = ladder.scales
    values = [periodicity_defects(spec, freq, energy, q, h).d1 for q in scales]
    slope, intercept = fit_log_slope(scales, values)
    bound = (lyap.l_hat - spec.gamma * ladder.beta_hat) + 2.0 * ladder.epsilon + SLOPE_SLACK
    return DecayFit("D1", tuple(scales), tuple(values), slope, intercept, bound)


def drift_decay_fit(
    spec: PotentialSpec,
    freq: Frequency,
    ladder: ResonanceLadder,
    quad_points_per_unit: int = 1000,
) -> DecayFit:
    """ln drift(q) against the ladder scales; bound -(gamma beta_hat - 2 eps) + slack."""
    _require_quasi_periodic(ladder)
    scales = ladder.scales
    values = [
        drift_integral(spec, freq, q, quad_points_per_unit, epsilon=ladder.epsilon).integral_value
        for q in scales
    ]
    slope, intercept = fit_log_slope(scales, values)
    bound = -(spec.gamma * ladder.beta_hat - 2.0 * ladder.epsilon) + SLOPE_SLACK
    return DecayFit("drift", tuple(scales), tuple(values), slope, intercept, bound)


__all__ = ["SLOPE_SLACK", "DecayFit", "defect_decay_fit", "drift_decay_fit", "fit_log_slope"]
