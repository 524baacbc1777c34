"""Log-scaled SL(2,R) values and state vectors.

An SL2 stores normalized entries N together with ``log_scale`` so that the
represented matrix is T = e^{log_scale} N. The log-determinant of T is
tracked separately in ``det_drift``; det N itself underflows once the
scale is large, so it is never used as the unimodularity witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from core.exceptions import IntegrityError, LemmaViolationError, PreconditionError

# Stored entries are rescaled to norm 1 when their norm leaves this window
NORM_WINDOW = (1.0, 1e4)

DET_TOLERANCE = 1e-6
UNIT_TOLERANCE = 1e-10
SIMON_FLOOR = 0.25
SIMON_SLACK = 1e-12
_EXP_LIMIT = 709.0


def _safe_exp(value: float) -> float:
    return math.inf if value > _EXP_LIMIT else math.exp(value)


def matrix_norm(a: np.ndarray) -> np.ndarray | float:
    """
    Operator 2-norm of 2x2 matrices, vectorised over leading axes.

    With s the sum of squared entries and d the determinant,
    sigma_max = (sqrt(s + 2d) + sqrt(s - 2d)) / 2, where
    s + 2d = (a11 + a22)^2 + (a12 - a21)^2 and s - 2d = (a11 - a22)^2 + (a12 + a21)^2
    are formed as sums of squares so nearly conformal matrices keep full accuracy.

    Raises:
        IntegrityError: If an entry is not finite.
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise IntegrityError("non-finite entry in 2x2 matrix")
    a11, a12, a21, a22 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]
    out = 0.5 * (np.hypot(a11 + a22, a12 - a21) + np.hypot(a11 - a22, a12 + a21))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SL2:
    """e^{log_scale} * N with det(e^{log_scale} N) = e^{det_drift}."""

    entries: tuple[float, float, float, float]
    log_scale: float = 0.0
    det_drift: float = 0.0

    @classmethod
    def identity(cls) -> "SL2":
        return cls((1.0, 0.0, 0.0, 1.0))

    @classmethod
    def from_array(
        cls,
        array: np.ndarray,
        log_scale: float = 0.0,
        det_drift: float | None = None,
        tolerance: float = DET_TOLERANCE,
    ) -> "SL2":
        """
        Wrap e^{log_scale} * array, renormalizing into the stored-norm window.

        When ``det_drift`` is omitted it is measured from ``array``, which
        must then have a determinant within ``tolerance`` of e^{-2 log_scale}.

        Raises:
            IntegrityError: If the measured determinant is off.
        """
        a = np.asarray(array, dtype=float).reshape(2, 2)
        if det_drift is None:
            det = float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]) * _safe_exp(2.0 * log_scale)
            if not abs(det - 1.0) <= tolerance:
                raise IntegrityError(f"determinant {det!r} is not within {tolerance:g} of 1")
            det_drift = math.log(det)
        return cls(tuple(float(v) for v in a.ravel()), log_scale, det_drift).renormalized()

    @property
    def array(self) -> np.ndarray:
        """Stored (normalized) entries N."""
        return np.array(self.entries, dtype=float).reshape(2, 2)

    def scaled_array(self) -> np.ndarray:
        """The represented matrix e^{log_scale} N; overflows for huge scales."""
        return _safe_exp(self.log_scale) * self.array

    @property
    def determinant(self) -> float:
        return math.exp(self.det_drift)

    def renormalized(self) -> "SL2":
        norm = matrix_norm(self.array)
        low, high = NORM_WINDOW
        if norm == 0.0 or low <= norm <= high:
            return self
        return SL2(
            tuple(v / norm for v in self.entries),
            self.log_scale + math.log(norm),
            self.det_drift,
        )

    def __matmul__(self, other: "SL2") -> "SL2":
        product = self.array @ other.array
        return SL2(
            tuple(float(v) for v in product.ravel()),
            self.log_scale + other.log_scale,
            self.det_drift + other.det_drift,
        ).renormalized()

    def check_determinant(self, tolerance: float = DET_TOLERANCE) -> None:
        if not abs(self.det_drift) <= tolerance:
            raise IntegrityError(
                f"determinant drift {self.det_drift:.3e} exceeds tolerance {tolerance:g}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entries": list(self.entries),
            "log_scale": self.log_scale,
            "det_drift": self.det_drift,
        }


@dataclass(frozen=True)
class StateVec:
    """Column (y'(x), y(x)) scaled by e^{log_scale}."""

    du: float
    u: float
    log_scale: float = 0.0
    zero_solution: bool = False

    def __post_init__(self) -> None:
        if self.du == 0.0 and self.u == 0.0 and not self.zero_solution:
            raise PreconditionError("state vector is zero; pass zero_solution=True for the zero solution")

    @classmethod
    def from_angle(cls, theta: float) -> "StateVec":
        return cls(math.cos(theta), math.sin(theta))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.du, self.u], dtype=float)

    @property
    def log_norm(self) -> float:
        raw = math.hypot(self.du, self.u)
        return -math.inf if raw == 0.0 else self.log_scale + math.log(raw)

    @property
    def norm(self) -> float:
        return 0.0 if self.zero_solution and self.du == 0.0 and self.u == 0.0 else _safe_exp(self.log_norm)


def sl2_inverse(b: SL2, tolerance: float = DET_TOLERANCE) -> SL2:
    """
    Adjugate inverse. The adjugate is homogeneous of degree one in the
    entries, so ``log_scale`` carries over unchanged.

    Raises:
        IntegrityError: If the tracked determinant drift exceeds ``tolerance``.
    """
    b.check_determinant(tolerance)
    n11, n12, n21, n22 = b.entries
    return SL2((n22, -n12, -n21, n11), b.log_scale, b.det_drift)


def log_norm(b: SL2) -> float:
    """log of the operator 2-norm of the represented matrix."""
    return b.log_scale + math.log(matrix_norm(b.array))


def operator_norm(b: SL2) -> float:
    """Operator 2-norm of the represented matrix (inf once it overflows)."""
    return _safe_exp(log_norm(b))


def propagate(phi: StateVec, b: SL2) -> StateVec:
    """B phi with log scales accumulated; the stored pair is kept at unit length."""
    v = b.array @ phi.array
    raw = math.hypot(float(v[0]), float(v[1]))
    if raw == 0.0:
        return StateVec(0.0, 0.0, zero_solution=True)
    return StateVec(float(v[0]) / raw, float(v[1]) / raw, phi.log_scale + b.log_scale + math.log(raw))


# =============================================================================
# Three-norm lower bound
# =============================================================================


@dataclass(frozen=True)
class SimonCheck:
    """Norms of B^2 phi, B phi and B^-1 phi for a unit phi."""

    norm_b2: float
    norm_b: float
    norm_binv: float

    @property
    def maximum(self) -> float:
        return max(self.norm_b2, self.norm_b, self.norm_binv)

    @property
    def achieved_by(self) -> str:
        labels = {"B^2": self.norm_b2, "B": self.norm_b, "B^-1": self.norm_binv}
        return max(labels, key=labels.__getitem__)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "norm_b2": self.norm_b2,
            "norm_b": self.norm_b,
            "norm_binv": self.norm_binv,
            "max": self.maximum,
            "achieved_by": self.achieved_by,
        }


def simon_bound_check(b: SL2, phi: StateVec) -> SimonCheck:
    """
    max{|B^2 phi|, |B phi|, |B^-1 phi|} >= 1/4 for unit phi.

    Raises:
        PreconditionError: If phi is not a unit vector.
        LemmaViolationError: If the bound fails, which means corrupted numerics.
    """
    if not abs(phi.norm - 1.0) <= UNIT_TOLERANCE:
        raise PreconditionError(f"phi must be a unit vector, |phi| = {phi.norm!r}")
    once = propagate(phi, b)
    check = SimonCheck(
        norm_b2=propagate(once, b).norm,
        norm_b=once.norm,
        norm_binv=propagate(phi, sl2_inverse(b)).norm,
    )
    if check.maximum < SIMON_FLOOR - SIMON_SLACK:
        raise LemmaViolationError(
            f"three-norm bound failed: max = {check.maximum:.6g} < 1/4 "
            f"(B={b.entries}, phi=({phi.du:.6g}, {phi.u:.6g}))"
        )
    return check


def simon_maxima(mats: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Vectorised max{|B^2 phi|, |B phi|, |B^-1 phi|} for unimodular (n,2,2) and unit (n,2)."""
    mats = np.asarray(mats, dtype=float)
    phis = np.asarray(phis, dtype=float)
    once = np.einsum("nij,nj->ni", mats, phis)
    twice = np.einsum("nij,nj->ni", mats, once)
    adj = np.empty_like(mats)
    adj[:, 0, 0] = mats[:, 1, 1]
    adj[:, 1, 1] = mats[:, 0, 0]
    adj[:, 0, 1] = -mats[:, 0, 1]
    adj[:, 1, 0] = -mats[:, 1, 0]
    back = np.einsum("nij,nj->ni", adj, phis)
    norms = np.stack(
        [np.linalg.norm(twice, axis=1), np.linalg.norm(once, axis=1), np.linalg.norm(back, axis=1)]
    )
    return norms.max(axis=0)


__all__ = [
    "DET_TOLERANCE",
    "NORM_WINDOW",
    "SL2",
    "SimonCheck",
    "StateVec",
    "log_norm",
    "matrix_norm",
    "operator_norm",
    "propagate",
    "simon_bound_check",
    "simon_maxima",
    "sl2_inverse",
]
