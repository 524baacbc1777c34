"""
Self-test suites for the numerical core.

Each suite returns a SuiteResult; a suite that raises a GordonLabError is
reported as failed with the error message. Only ``simon_fuzz`` and
``variation_of_constants`` draw random numbers, both from ``seed``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from cocycle import (
    StateVec,
    TransferRequest,
    block_propagators,
    schroedinger_coefficients,
    simon_maxima,
    transfer,
)
from cocycle.sl2 import SIMON_FLOOR, SIMON_SLACK
from core.exceptions import GordonLabError
from core.logging_config import get_logger, log_timed_stage
from frequency import Frequency, golden_mean
from gordon import variation_of_constants_oracle
from potential import PotentialSpec, builtin_model

LOGGER = get_logger(__name__)

DEFAULT_FUZZ_COUNT = 100_000
DEFAULT_STEP = 1e-3
DET_FAULT_FACTOR = 1.0 + 1e-6

CLOSED_FORM_TOLERANCE = 1e-8
WRONSKIAN_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-8
ORACLE_TOLERANCE = 1e-6
ORDER_RANGE = (3.0, 5.0)

SUITE_NAMES = (
    "simon_fuzz",
    "closed_forms",
    "order_check",
    "wronskian",
    "cocycle_identity",
    "variation_of_constants",
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str = ""
    duration_ms: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "duration_ms": round(self.duration_ms, 1),
        }


def _frequency() -> Frequency:
    return golden_mean(30)


def _builtin_suite() -> List[PotentialSpec]:
    table = np.cos(2.0 * math.pi * np.arange(64) / 64.0)
    return [
        builtin_model("constant", [1.0]),
        builtin_model("cosine", [1.0]),
        builtin_model("separable", [1.0], table=table),
        builtin_model("sawtooth", [1.0]),
        builtin_model("hoelder_cusp", [1.0, 0.5]),
    ]


def _random_sl2(rng: np.random.Generator, n: int) -> np.ndarray:
    """R(a) diag(s, 1/s) R(b) with ln s uniform on [-6, 6]."""
    a, b = rng.uniform(0.0, 2.0 * math.pi, size=(2, n))
    s = np.exp(rng.uniform(-6.0, 6.0, size=n))

    def rot(t: np.ndarray) -> np.ndarray:
        c, d = np.cos(t), np.sin(t)
        return np.stack([np.stack([c, -d], axis=-1), np.stack([d, c], axis=-1)], axis=-2)

    diag = np.zeros((n, 2, 2))
    diag[:, 0, 0] = s
    diag[:, 1, 1] = 1.0 / s
    return rot(a) @ diag @ rot(b)


def closed_form(w: float, x: float) -> np.ndarray:
    """Exact transfer over length x for constant V - E = w."""
    if w > 0:
        k = math.sqrt(w)
        return np.array([[math.cosh(k * x), k * math.sinh(k * x)], [math.sinh(k * x) / k, math.cosh(k * x)]])
    if w < 0:
        k = math.sqrt(-w)
        return np.array([[math.cos(k * x), -k * math.sin(k * x)], [math.sin(k * x) / k, math.cos(k * x)]])
    return np.array([[1.0, 0.0], [x, 1.0]])


def constant_propagator(w: float, length: float, h: float) -> np.ndarray:
    """Raw scheme product for constant coefficients; accepts any step."""
    coeff = lambda x: schroedinger_coefficients(np.full(np.shape(x), w))
    out = np.eye(2)
    for block, _ in block_propagators(0.0, length, h, lambda a, b: np.empty(0), coeff, log_det=False):
        out = block @ out
    return out


def _relative_error(got: np.ndarray, want: np.ndarray) -> float:
    return float(np.abs(got - want).max() / np.abs(want).max())


# =============================================================================
# Suites
# =============================================================================


def simon_fuzz(seed: int = 0, count: int = DEFAULT_FUZZ_COUNT, **_: Any) -> SuiteResult:
    rng = np.random.default_rng(seed)
    mats = _random_sl2(rng, count)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
    phis = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    maxima = simon_maxima(mats, phis)
    worst = float(maxima.min())
    passed = worst >= SIMON_FLOOR - SIMON_SLACK
    return SuiteResult("simon_fuzz", passed, f"{count} instances, smallest max {worst:.6f}")


def closed_forms(h: float = DEFAULT_STEP, **_: Any) -> SuiteResult:
    freq = _frequency()
    worst = 0.0
    for c, energy in ((2.0, 1.0), (1.0, 5.0)):
        spec = builtin_model("constant", [c])
        got = transfer(spec, freq, TransferRequest(energy, 0.0, 10.0, h=h)).scaled_array()
        worst = max(worst, _relative_error(got, closed_form(c - energy, 10.0)))
    return SuiteResult("closed_forms", worst <= CLOSED_FORM_TOLERANCE, f"max relative error {worst:.3e}")


def order_check(h: float = DEFAULT_STEP, **_: Any) -> SuiteResult:
    """Observed order from errors at h, h/2, h/4 on a fast harmonic solution."""
    w, length = -1600.0, 10.0
    exact = closed_form(w, length)
    errors = [_relative_error(constant_propagator(w, length, h / 2**k), exact) for k in range(3)]
    if not all(math.isfinite(e) and e > 0 for e in errors):
        return SuiteResult("order_check", False, f"degraded order: errors {errors}")
    orders = [math.log2(errors[k] / errors[k + 1]) for k in range(2)]
    lo, hi = ORDER_RANGE
    passed = all(lo <= p <= hi for p in orders)
    label = "observed order" if passed else "degraded order"
    return SuiteResult("order_check", passed, f"{label} {orders[0]:.2f}, {orders[1]:.2f} at h = {h:g}")


def wronskian(h: float = DEFAULT_STEP, **_: Any) -> SuiteResult:
    freq = _frequency()
    worst = 0.0
    for spec in _builtin_suite():
        t = transfer(spec, freq, TransferRequest(0.5, 0.0, 1000.0, h=h, tolerance=1.0))
        worst = max(worst, abs(math.expm1(t.det_drift)))
    return SuiteResult("wronskian", worst <= WRONSKIAN_TOLERANCE, f"max |det T - 1| {worst:.3e}")


def cocycle_identity(h: float = DEFAULT_STEP, **_: Any) -> SuiteResult:
    freq = _frequency()
    worst = 0.0
    for spec in (builtin_model("cosine", [1.0]), builtin_model("sawtooth", [1.0])):
        req = TransferRequest(-0.3, 0.0, 9.2, h=h)
        whole = transfer(spec, freq, req).scaled_array()
        split = transfer(spec, freq, req.interval(3.7, 9.2)).scaled_array() @ transfer(
            spec, freq, req.interval(0.0, 3.7)
        ).scaled_array()
        worst = max(worst, _relative_error(split, whole))
    return SuiteResult("cocycle_identity", worst <= IDENTITY_TOLERANCE, f"max relative mismatch {worst:.3e}")


def variation_of_constants(seed: int = 0, h: float = DEFAULT_STEP, n_phi: int = 16, **_: Any) -> SuiteResult:
    rng = np.random.default_rng(seed)
    freq = _frequency()
    worst = 0.0
    for spec in (builtin_model("cosine", [1.0]), builtin_model("sawtooth", [1.0])):
        for q in (5, 21):
            for theta in rng.uniform(0.0, 2.0 * math.pi, size=n_phi):
                result = variation_of_constants_oracle(spec, freq, 0.7, q, StateVec.from_angle(theta), h=h)
                worst = max(worst, result.relative_deviation)
    return SuiteResult("variation_of_constants", worst <= ORACLE_TOLERANCE, f"max relative deviation {worst:.3e}")


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "simon_fuzz": simon_fuzz,
    "closed_forms": closed_forms,
    "order_check": order_check,
    "wronskian": wronskian,
    "cocycle_identity": cocycle_identity,
    "variation_of_constants": variation_of_constants,
}


def run_suites(
    seed: int = 0,
    fuzz_count: int = DEFAULT_FUZZ_COUNT,
    h: float = DEFAULT_STEP,
    only: Optional[List[str]] = None,
) -> List[SuiteResult]:
    """Run the named suites (all by default) in a fixed order."""
    names = [n for n in SUITE_NAMES if only is None or n in only]
    results = []
    for name in names:
        start = time.perf_counter()
        try:
            result = SUITES[name](seed=seed, count=fuzz_count, h=h)
        except GordonLabError as exc:
            result = SuiteResult(name, False, f"{type(exc).__name__}: {exc}")
        elapsed = (time.perf_counter() - start) * 1000
        result = SuiteResult(result.name, result.passed, result.detail, elapsed)
        log_timed_stage(LOGGER, f"selftest.{name}", elapsed, passed=result.passed)
        if not result.passed:
            LOGGER.warning(f"Self-test {name} failed: {result.detail}")
        results.append(result)
    return results


__all__ = [
    "DET_FAULT_FACTOR",
    "SUITE_NAMES",
    "SuiteResult",
    "closed_form",
    "constant_propagator",
    "run_suites",
]
