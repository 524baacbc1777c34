"""The potential class A_gamma: model specs and builtin models.

A model is V(x, y) on (R/Z)^2, gamma-Hölder in y on each breakpoint
interval. Evaluators are vectorised over numpy arrays and receive y
already reduced to [0, 1); they reduce x themselves when it matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd

from core.exceptions import ConfigurationError, InvariantViolationError, PreconditionError
from core.logging_config import get_logger

LOGGER = get_logger(__name__)

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]
DifferenceFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]

BUILTIN_MODELS = ("constant", "cosine", "separable", "sawtooth", "hoelder_cusp")

# Tolerances used by PotentialSpec.validate
PERIODICITY_TOLERANCE = 1e-9
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class PotentialSpec:
    """
    A member of A_gamma with analytically known bounds.

    ``breakpoints`` are the jump points of V in y; ``x_breakpoints`` the
    jump points in x (mod 1) of tabulated x-dependence.
    """

    label: str
    gamma: float
    breakpoints: tuple[float, ...]
    evaluator: Evaluator = field(repr=False, compare=False)
    sup_bound: float
    holder_bound: float
    difference_fn: Optional[DifferenceFn] = field(default=None, repr=False, compare=False)
    params: tuple[float, ...] = ()
    x_breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not 0 < self.gamma <= 1:
            raise PreconditionError(f"gamma must lie in (0, 1], got {self.gamma}")
        bps = tuple(float(b) for b in self.breakpoints)
        if len(bps) < 2 or bps[0] != 0.0 or bps[-1] != 1.0:
            raise PreconditionError("breakpoints must start at 0 and end at 1")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise PreconditionError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        xbps = tuple(sorted(float(b) for b in self.x_breakpoints))
        if any(not 0.0 <= b < 1.0 for b in xbps):
            raise PreconditionError("x breakpoints must lie in [0, 1)")
        object.__setattr__(self, "x_breakpoints", xbps)

    @property
    def m(self) -> int:
        """Number of breakpoints a_1 = 0 < ... < a_m = 1."""
        return len(self.breakpoints)

    @property
    def interior_breakpoints(self) -> tuple[float, ...]:
        """a_1..a_{m-1}; a_m coincides with a_1 modulo 1."""
        return self.breakpoints[:-1]

    @property
    def name(self) -> str:
        return self.label.split("(", 1)[0]

    def __call__(self, x: np.ndarray | float, y: np.ndarray | float) -> np.ndarray:
        x_arr = np.asarray(x, dtype=float)
        y_arr = np.mod(np.asarray(y, dtype=float), 1.0)
        return self.evaluator(x_arr, y_arr)

    def difference(self, x: np.ndarray | float, y: np.ndarray | float, delta: float) -> np.ndarray:
        """V(x, y) - V(x, y + delta), accurate for shifts far below double resolution."""
        if self.difference_fn is not None:
            return self.difference_fn(
                np.asarray(x, dtype=float), np.mod(np.asarray(y, dtype=float), 1.0), float(delta)
            )
        return self(x, y) - self(x, np.asarray(y, dtype=float) + delta)

    def validate(self, n_x: int = 16, n_y: int = 64) -> None:
        """
        Spot-check 1-periodicity in both variables and the sup bound.

        Raises:
            InvariantViolationError: On the first failing sample.
        """
        xs = np.arange(n_x) / n_x
        ys = (np.arange(n_y) + 0.37) / n_y
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        base = self(X, Y)
        for label, other in (("x", self(X + 1.0, Y)), ("y", self(X, Y + 1.0))):
            gap = np.abs(base - other)
            if gap.max() > PERIODICITY_TOLERANCE:
                i, j = np.unravel_index(int(gap.argmax()), gap.shape)
                raise InvariantViolationError(
                    f"{self.label}: not 1-periodic in {label} at (x={xs[i]:.6g}, y={ys[j]:.6g})"
                )
        peak = float(np.abs(base).max())
        if peak > self.sup_bound * (1 + BOUND_SLACK) + BOUND_SLACK:
            raise InvariantViolationError(
                f"{self.label}: sampled |V| = {peak:.6g} exceeds sup_bound {self.sup_bound:.6g}"
            )


# =============================================================================
# Builtin models
# =============================================================================


def _constant(c: float) -> PotentialSpec:
    return PotentialSpec(
        label=f"constant(c={c:g})",
        gamma=1.0,
        breakpoints=(0.0, 1.0),
        evaluator=lambda x, y: np.full(np.broadcast(x, y).shape, c, dtype=float),
        sup_bound=abs(c),
        holder_bound=0.0,
        difference_fn=lambda x, y, d: np.zeros(np.broadcast(x, y).shape),
        params=(c,),
    )


def _cosine_difference(lam: float) -> DifferenceFn:
    # cos(2 pi y) - cos(2 pi (y + d)) = 2 sin(pi (2y + d)) sin(pi d)
    def diff(x: np.ndarray, y: np.ndarray, d: float) -> np.ndarray:
        out = 2.0 * lam * np.sin(np.pi * (2.0 * y + d)) * math.sin(math.pi * d)
        return np.broadcast_to(out, np.broadcast(x, y).shape).astype(float)

    return diff


def _cosine(lam: float) -> PotentialSpec:
    return PotentialSpec(
        label=f"cosine(lambda={lam:g})",
        gamma=1.0,
        breakpoints=(0.0, 1.0),
        evaluator=lambda x, y: lam * np.cos(2.0 * np.pi * y) + 0.0 * x,
        sup_bound=abs(lam),
        holder_bound=2.0 * math.pi * abs(lam),
        difference_fn=_cosine_difference(lam),
        params=(lam,),
    )


def _separable(lam: float, table: np.ndarray) -> PotentialSpec:
    values = np.asarray(table, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ConfigurationError("separable model needs a non-empty 1-D sample table")
    n = values.size

    def evaluate(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        idx = np.floor(np.mod(x, 1.0) * n + 0.5).astype(int) % n
        return values[idx] + lam * np.cos(2.0 * np.pi * y)

    return PotentialSpec(
        label=f"separable(lambda={lam:g},n={n})",
        gamma=1.0,
        breakpoints=(0.0, 1.0),
        evaluator=evaluate,
        sup_bound=float(np.abs(values).max()) + abs(lam),
        holder_bound=2.0 * math.pi * abs(lam),
        difference_fn=_cosine_difference(lam),
        params=(lam,),
        x_breakpoints=tuple((k + 0.5) / n for k in range(n)),
    )


def _sawtooth_values(lam: float, y: np.ndarray) -> np.ndarray:
    return np.where(y < 0.5, 2.0 * lam * y, 2.0 * lam * (0.5 - y))


def _sawtooth(lam: float) -> PotentialSpec:
    def diff(x: np.ndarray, y: np.ndarray, d: float) -> np.ndarray:
        shifted = y + d
        same_left = (y < 0.5) & (shifted >= 0.0) & (shifted < 0.5)
        same_right = (y >= 0.5) & (shifted >= 0.5) & (shifted < 1.0)
        direct = _sawtooth_values(lam, y) - _sawtooth_values(lam, np.mod(shifted, 1.0))
        out = np.where(same_left, -2.0 * lam * d, np.where(same_right, 2.0 * lam * d, direct))
        return np.broadcast_to(out, np.broadcast(x, y).shape).astype(float)

    return PotentialSpec(
        label=f"sawtooth(lambda={lam:g})",
        gamma=1.0,
        breakpoints=(0.0, 0.5, 1.0),
        evaluator=lambda x, y: _sawtooth_values(lam, y) + 0.0 * x,
        sup_bound=abs(lam),
        holder_bound=2.0 * abs(lam),
        difference_fn=diff,
        params=(lam,),
    )


def _cusp_difference(lam: float, gamma: float) -> DifferenceFn:
    # |sin pi(y+d)| / |sin pi y| = |1 + r| with r = cot(pi y) sin(pi d) - 2 sin^2(pi d / 2)
    def diff(x: np.ndarray, y: np.ndarray, d: float) -> np.ndarray:
        s = np.sin(np.pi * y)
        base = lam * np.abs(s) ** gamma
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            r = np.cos(np.pi * y) / s * math.sin(math.pi * d) - 2.0 * math.sin(0.5 * math.pi * d) ** 2
            log_ratio = np.where(r > -1.0, np.log1p(np.maximum(r, -1.0)), np.log(np.abs(1.0 + r)))
            scaled = -base * np.expm1(gamma * log_ratio)
        on_cusp = -lam * np.abs(np.sin(np.pi * (y + d))) ** gamma
        out = np.where(s == 0.0, on_cusp, scaled)
        return np.broadcast_to(out, np.broadcast(x, y).shape).astype(float)

    return diff


def _hoelder_cusp(lam: float, gamma: float) -> PotentialSpec:
    if not 0 < gamma <= 1:
        raise ConfigurationError(f"hoelder_cusp needs 0 < gamma <= 1, got {gamma}")
    return PotentialSpec(
        label=f"hoelder_cusp(lambda={lam:g},gamma={gamma:g})",
        gamma=gamma,
        breakpoints=(0.0, 1.0),
        evaluator=lambda x, y: lam * np.abs(np.sin(np.pi * y)) ** gamma + 0.0 * x,
        sup_bound=abs(lam),
        holder_bound=abs(lam) * math.pi**gamma,
        difference_fn=_cusp_difference(lam, gamma),
        params=(lam, gamma),
    )


def builtin_model(
    name: str,
    params: Sequence[float],
    table: Optional[np.ndarray] = None,
) -> PotentialSpec:
    """
    Build a builtin model.

    Parameters by name:
    - constant: [c]
    - cosine: [lambda]
    - separable: [lambda] plus ``table`` (V_1 samples on a uniform x grid)
    - sawtooth: [lambda]
    - hoelder_cusp: [lambda, gamma]

    Raises:
        ConfigurationError: Unknown name or missing parameters.
    """
    if name not in BUILTIN_MODELS:
        raise ConfigurationError(f"unknown potential model {name!r}; expected one of {BUILTIN_MODELS}")
    values = [float(p) for p in params]
    if not values:
        raise ConfigurationError(f"model {name!r} needs lambda")
    lam = values[0]

    if name == "constant":
        return _constant(lam)
    if name == "cosine":
        return _cosine(lam)
    if name == "sawtooth":
        return _sawtooth(lam)
    if name == "separable":
        if table is None:
            raise ConfigurationError("separable model needs a V_1 sample table")
        return _separable(lam, table)
    if len(values) < 2:
        raise ConfigurationError("hoelder_cusp needs [lambda, gamma]")
    return _hoelder_cusp(lam, values[1])


def load_sample_table(path: str | Path) -> np.ndarray:
    """
    Load a V_1 sample table from CSV with columns ``x,value``.

    The x column must be the uniform grid k/n, k = 0..n-1.

    Raises:
        ConfigurationError: Missing file, missing columns or a non-uniform grid.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"sample table not found: {path}")
    df = pd.read_csv(path)
    missing = {"x", "value"} - set(df.columns)
    if missing:
        raise ConfigurationError(f"sample table {path} is missing columns {sorted(missing)}")
    df = df.sort_values("x", kind="mergesort")
    xs = df["x"].to_numpy(dtype=float)
    n = xs.size
    if n == 0 or np.abs(xs - np.arange(n) / n).max() > 1e-9:
        raise ConfigurationError(f"sample table {path} is not on the uniform grid k/{n}")
    LOGGER.debug(f"Loaded {n} V_1 samples from {path}")
    return df["value"].to_numpy(dtype=float)


__all__ = [
    "BUILTIN_MODELS",
    "PotentialSpec",
    "builtin_model",
    "load_sample_table",
]
