"""Drift integral and good-set complement at a scale q.

drift(q) = int_0^q |V(t, omega t) - V(t, omega (t + q))| dt, and I^c is the
part of [0, q] where omega*t comes within 2 e^{-(beta_hat - eps) q} of a
translated breakpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.optimize import brentq

from core.exceptions import PreconditionError, ScaleBudgetError
from core.logging_config import get_logger
from frequency import BetaEstimate, Frequency, beta_estimate, default_epsilon, signed_shift
from potential.crossings import breakpoint_crossings, merge_cut_points
from potential.models import PotentialSpec

LOGGER = get_logger(__name__)

GAUSS_ORDER = 4
DEFAULT_QUAD_POINTS_PER_UNIT = 1000
# Relative inward nudge used when sampling a subpanel's end points
_EDGE_NUDGE = 1e-9

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


@dataclass(frozen=True)
class DriftReport:
    """Drift integral at one scale, with the good-set complement and reference bound."""

    q: int
    integral_value: float
    good_set_complement_measure: float
    bound_reference: float
    epsilon: float
    beta_hat: float
    panels: int
    fallback_uniform: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "integral_value": self.integral_value,
            "good_set_complement_measure": self.good_set_complement_measure,
            "bound_reference": self.bound_reference,
            "epsilon": self.epsilon,
            "beta_hat": self.beta_hat,
            "panels": self.panels,
            "fallback_uniform": self.fallback_uniform,
        }


def _subpanels(edges: np.ndarray, points_per_unit: int) -> tuple[np.ndarray, np.ndarray]:
    """Split each panel into equal subpanels carrying GAUSS_ORDER nodes each."""
    lengths = np.diff(edges)
    counts = np.maximum(1, np.ceil(lengths * points_per_unit / GAUSS_ORDER)).astype(int)
    owner = np.repeat(np.arange(lengths.size), counts)
    first = np.concatenate(([0], np.cumsum(counts)[:-1]))
    local = np.arange(owner.size) - first[owner]
    width = lengths[owner] / counts[owner]
    lo = edges[owner] + local * width
    return lo, lo + width


def _split_at_sign_changes(
    integrand, lo: np.ndarray, hi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Insert the zeros of the integrand so |g| is smooth on every subpanel."""
    nudge = _EDGE_NUDGE * (hi - lo)
    g_lo = integrand(lo + nudge)
    g_hi = integrand(hi - nudge)
    flips = np.nonzero(np.sign(g_lo) * np.sign(g_hi) < 0)[0]
    if flips.size == 0:
        return lo, hi

    scalar = lambda t: float(integrand(np.array([t]))[0])  # noqa: E731
    roots = np.array([brentq(scalar, lo[k] + nudge[k], hi[k] - nudge[k]) for k in flips])
    new_lo = np.concatenate((lo, roots))
    new_hi = np.concatenate((hi, hi[flips]))
    new_hi[flips] = roots
    order = np.argsort(new_lo, kind="mergesort")
    return new_lo[order], new_hi[order]


def _gauss_integrate(integrand, lo: np.ndarray, hi: np.ndarray) -> float:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    values = np.abs(integrand(nodes.ravel())).reshape(nodes.shape)
    return float(np.sum(half * (values @ _GAUSS_WEIGHTS)))


def drift_integral(
    spec: PotentialSpec,
    freq: Frequency,
    q: int,
    quad_points_per_unit: int = DEFAULT_QUAD_POINTS_PER_UNIT,
    epsilon: Optional[float] = None,
    beta: Optional[BetaEstimate] = None,
) -> DriftReport:
    """
    Composite Gauss-Legendre quadrature of the drift integral at scale q.

    Panels are split wherever omega*t or omega*(t+q) crosses a breakpoint
    and wherever the integrand changes sign. If the crossing set is too
    large to enumerate the quadrature falls back to uniform subdivision
    and the report carries ``fallback_uniform``.

    Raises:
        PreconditionError: If q < 1 or fewer than GAUSS_ORDER points per unit.
    """
    if q < 1:
        raise PreconditionError(f"q must be >= 1, got {q}")
    if quad_points_per_unit < GAUSS_ORDER:
        raise PreconditionError(f"quad_points_per_unit must be >= {GAUSS_ORDER}")

    omega = freq.omega
    shift = signed_shift(freq, q)

    def integrand(t: np.ndarray) -> np.ndarray:
        return spec.difference(t, np.mod(omega * t, 1.0), shift)

    fallback = False
    try:
        cuts_now = breakpoint_crossings(spec.interior_breakpoints, omega, 0.0, float(q))
        cuts_shifted = breakpoint_crossings(spec.interior_breakpoints, omega, 0.0, float(q), offset=shift)
        edges = merge_cut_points(cuts_now, cuts_shifted, start=0.0, end=float(q))
    except ScaleBudgetError:
        LOGGER.warning(f"Crossing set too large at q={q}; using uniform subdivision")
        fallback = True
        edges = np.array([0.0, float(q)])

    lo, hi = _subpanels(edges, quad_points_per_unit)
    lo, hi = _split_at_sign_changes(integrand, lo, hi)
    value = _gauss_integrate(integrand, lo, hi)

    beta = beta if beta is not None else beta_estimate(freq)
    beta_hat = beta.running_max
    if math.isinf(beta_hat):
        eps = 0.0 if epsilon is None else epsilon
        bound_reference = 0.0
        complement = 0.0
    else:
        eps = default_epsilon(beta_hat) if epsilon is None else epsilon
        bound_reference = math.exp(-(spec.gamma * beta_hat - eps) * q)
        complement = (
            good_set_measure(spec, freq, q, eps, beta=beta) if 0 < eps < beta_hat else float("nan")
        )

    return DriftReport(
        q=q,
        integral_value=value,
        good_set_complement_measure=complement,
        bound_reference=bound_reference,
        epsilon=eps,
        beta_hat=beta_hat,
        panels=int(lo.size),
        fallback_uniform=fallback,
    )


# =============================================================================
# Good set
# =============================================================================


def complement_measure(breakpoints: tuple[float, ...], omega: float, q: int, radius: float) -> float:
    """
    Lebesgue measure of {t in [0,q] : |omega t - (a_i + l)| < radius for some i, l = 0..q-1}.

    Each constraint is an interval in t; the union is merged exactly.
    """
    if radius <= 0:
        return 0.0
    centers = np.array([a + ell for a in breakpoints for ell in range(q)], dtype=float)
    starts = np.clip((centers - radius) / omega, 0.0, float(q))
    ends = np.clip((centers + radius) / omega, 0.0, float(q))
    order = np.argsort(starts, kind="mergesort")
    total = 0.0
    cur_lo, cur_hi = starts[order[0]], ends[order[0]]
    for k in order[1:]:
        s, e = starts[k], ends[k]
        if s > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = s, e
        elif e > cur_hi:
            cur_hi = e
    total += cur_hi - cur_lo
    return float(total)


def _radius(beta_hat: float, epsilon: float, q: int) -> float:
    return 2.0 * math.exp(-(beta_hat - epsilon) * q)


def _check_good_set_inputs(freq: Frequency, epsilon: float, beta_hat: float) -> None:
    if freq.is_rational:
        raise PreconditionError("good set is undefined for rational frequencies (beta = +inf)")
    if not 0 < epsilon < beta_hat:
        raise PreconditionError(f"epsilon must satisfy 0 < epsilon < beta_hat={beta_hat:.6g}")


def good_set_measure(
    spec: PotentialSpec,
    freq: Frequency,
    q: int,
    epsilon: float,
    beta: Optional[BetaEstimate] = None,
) -> float:
    """
    |I^c| computed exactly as a union of intervals.

    Raises:
        PreconditionError: For rational frequencies or epsilon outside (0, beta_hat).
    """
    beta_hat = (beta if beta is not None else beta_estimate(freq)).running_max
    _check_good_set_inputs(freq, epsilon, beta_hat)
    return complement_measure(spec.interior_breakpoints, freq.omega, q, _radius(beta_hat, epsilon, q))


def good_set_monte_carlo(
    spec: PotentialSpec,
    freq: Frequency,
    q: int,
    epsilon: float,
    n_samples: int = 1_000_000,
    seed: int = 0,
    beta: Optional[BetaEstimate] = None,
) -> tuple[float, float]:
    """Monte-Carlo oracle for |I^c|: (estimate, standard error)."""
    beta_hat = (beta if beta is not None else beta_estimate(freq)).running_max
    _check_good_set_inputs(freq, epsilon, beta_hat)
    radius = _radius(beta_hat, epsilon, q)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, float(q), n_samples)
    u = freq.omega * t
    bad = np.zeros(n_samples, dtype=bool)
    for a in spec.interior_breakpoints:
        ell = np.clip(np.rint(u - a), 0, q - 1)
        bad |= np.abs(u - a - ell) < radius
    p = float(bad.mean())
    return q * p, q * math.sqrt(p * (1.0 - p) / n_samples)


__all__ = [
    "DEFAULT_QUAD_POINTS_PER_UNIT",
    "DriftReport",
    "complement_measure",
    "drift_integral",
    "good_set_measure",
    "good_set_monte_carlo",
]
