"""Two independent computations of Y(q) phi = (T - T_shifted)(q) phi.

(a) variation of constants: Y(q) = T(q) int_0^q T(t)^{-1} (A - A_shifted)(t) T_shifted(t) dt,
    by composite Simpson on panels split at the breakpoint crossings of
    both phases, with T(t) and T_shifted(t) propagated node by node;
(b) the joint 4x4 system of the defect computation, applied to phi.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from cocycle import (
    MAX_STEP,
    StateVec,
    crossing_cutter,
    panel_steps,
    rk4_propagators,
    schroedinger_coefficients,
)
from core.exceptions import PreconditionError
from core.logging_config import get_logger
from frequency import Frequency, signed_shift
from gordon.defects import joint_solution
from potential import PotentialSpec, merge_cut_points

LOGGER = get_logger(__name__)

# Largest scale the node-by-node propagation accepts
MAX_ORACLE_SCALE = 500
RELATIVE_FLOOR = 1e-12


@dataclass(frozen=True)
class OracleResult:
    """Y(q) phi from both computations and their max component deviation."""

    q: int
    quadrature: tuple[float, float]
    joint: tuple[float, float]
    deviation: float

    @property
    def relative_deviation(self) -> float:
        return self.deviation / (float(np.hypot(*self.joint)) + RELATIVE_FLOOR)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "quadrature": list(self.quadrature),
            "joint": list(self.joint),
            "deviation": self.deviation,
            "relative_deviation": self.relative_deviation,
        }


def _adjugates(mats: np.ndarray) -> np.ndarray:
    out = np.empty_like(mats)
    out[:, 0, 0] = mats[:, 1, 1]
    out[:, 1, 1] = mats[:, 0, 0]
    out[:, 0, 1] = -mats[:, 0, 1]
    out[:, 1, 0] = -mats[:, 1, 0]
    return out


def _running_products(props: np.ndarray) -> np.ndarray:
    """States before each step and after the last: shape (n + 1, 2, 2)."""
    out = np.empty((props.shape[0] + 1, 2, 2))
    out[0] = np.eye(2)
    for k in range(props.shape[0]):
        out[k + 1] = props[k] @ out[k]
    return out


def _simpson_weights(step: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weights for each step's left node and for each panel's closing node."""
    first = np.concatenate(([0], np.cumsum(counts)[:-1]))
    local = np.arange(step.size) - np.repeat(first, counts)
    pattern = np.where(local == 0, 1.0, np.where(local % 2 == 1, 4.0, 2.0))
    closing = step[first + counts - 1] / 3.0
    return pattern * step / 3.0, closing


def quadrature_solution(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    q: int,
    phase: float,
    phi: np.ndarray,
    h: float,
) -> np.ndarray:
    """Y(q) phi from the variation-of-constants integral."""
    omega = freq.omega
    cuts = crossing_cutter(spec, freq, 0.0, phase)(0.0, float(q))
    edges = merge_cut_points(cuts, start=0.0, end=float(q))
    grid = panel_steps(edges, h, even=True)
    counts = grid.counts

    def coeff(x: np.ndarray, shift: float) -> np.ndarray:
        return schroedinger_coefficients(spec(x, omega * x + shift) - energy)

    t_props = rk4_propagators(coeff(grid.left, 0.0), coeff(grid.mid, 0.0), coeff(grid.right, 0.0), grid.step)
    s_props = rk4_propagators(
        coeff(grid.left, phase), coeff(grid.mid, phase), coeff(grid.right, phase), grid.step
    )
    t_nodes = _running_products(t_props)
    s_nodes = _running_products(s_props)

    def integrand(index: np.ndarray, points: np.ndarray) -> np.ndarray:
        forcing = spec.difference(points, omega * points, phase)
        shifted = np.einsum("nij,j->ni", s_nodes[index], phi)
        driven = np.stack([forcing * shifted[:, 1], np.zeros_like(forcing)], axis=1)
        return np.einsum("nij,nj->ni", _adjugates(t_nodes[index]), driven)

    steps = np.arange(grid.size)
    closing_steps = np.cumsum(counts) - 1
    w_left, w_close = _simpson_weights(grid.step, counts)
    total = (w_left[:, None] * integrand(steps, grid.left)).sum(axis=0)
    total += (w_close[:, None] * integrand(closing_steps + 1, grid.right[closing_steps])).sum(axis=0)
    return t_nodes[-1] @ total


def variation_of_constants_oracle(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    q: int,
    phi: StateVec,
    h: float = 1e-3,
) -> OracleResult:
    """
    Compare the integral formula for Y(q) phi with the joint-system value.

    Raises:
        PreconditionError: If q is outside [1, MAX_ORACLE_SCALE] or h is invalid.
    """
    if not 1 <= q <= MAX_ORACLE_SCALE:
        raise PreconditionError(f"oracle scale must lie in [1, {MAX_ORACLE_SCALE}], got {q}")
    if not 0 < h <= MAX_STEP:
        raise PreconditionError(f"step h must lie in (0, {MAX_STEP:g}], got {h!r}")
    delta = signed_shift(freq, q)
    vec = phi.array * np.exp(phi.log_scale)

    via_integral = quadrature_solution(spec, freq, energy, q, delta, vec, h)
    joint = joint_solution(spec, freq, energy, q, delta, h)
    via_joint = np.exp(joint.log_scale) * (joint.bottom @ vec)

    deviation = float(np.abs(via_integral - via_joint).max())
    result = OracleResult(
        q=q,
        quadrature=(float(via_integral[0]), float(via_integral[1])),
        joint=(float(via_joint[0]), float(via_joint[1])),
        deviation=deviation,
    )
    LOGGER.debug(f"Oracle at q={q}: deviation {deviation:.3e} (relative {result.relative_deviation:.3e})")
    return result


__all__ = ["MAX_ORACLE_SCALE", "OracleResult", "quadrature_solution", "variation_of_constants_oracle"]
