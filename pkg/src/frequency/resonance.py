"""Resonant-scale selection: convergent denominators with exceptionally good approximation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from core.exceptions import PrecisionError, PreconditionError
from core.logging_config import get_logger
from frequency.beta import BetaEstimate, beta_estimate
from frequency.continued_fraction import Frequency, certified_distance

LOGGER = get_logger(__name__)

DEFAULT_MAX_Q = 200
DEFAULT_EPSILON_FRACTION = 0.05


@dataclass(frozen=True)
class ResonantScale:
    """One rung of the ladder."""

    q: int
    level: int
    log_distance: float
    log_bound: float
    ratio: float

    @property
    def bound(self) -> float:
        """e^{-(beta_hat - eps) q}; underflows to 0 for very deep scales."""
        return math.exp(self.log_bound)


@dataclass(frozen=True)
class ResonanceLadder:
    """Scales q with ||q omega|| <= e^{-(beta_hat - eps) q}, capped at max_q."""

    epsilon: float
    beta_hat: float
    max_q: int
    entries: tuple[ResonantScale, ...] = ()
    periodic: bool = False
    diagnostic: str = ""

    @property
    def scales(self) -> tuple[int, ...]:
        return tuple(entry.q for entry in self.entries)

    @property
    def bounds(self) -> tuple[float, ...]:
        return tuple(entry.bound for entry in self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def to_dict(self) -> Dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "beta_hat": self.beta_hat,
            "max_q": self.max_q,
            "periodic": self.periodic,
            "scales": list(self.scales),
            "diagnostic": self.diagnostic,
        }


def default_epsilon(beta_hat: float) -> float:
    """Pipeline default: a twentieth of beta_hat."""
    return DEFAULT_EPSILON_FRACTION * beta_hat


def resonant_scales(
    freq: Frequency,
    epsilon: Optional[float] = None,
    max_q: int = DEFAULT_MAX_Q,
    min_q: int = 1,
    beta: Optional[BetaEstimate] = None,
) -> ResonanceLadder:
    """
    Select the resonant ladder of ``freq``.

    Exact rationals short-circuit to the periodic ladder [q_0].
    An empty ladder is a valid result carrying a diagnostic.

    Raises:
        PreconditionError: Unless 0 < epsilon < beta_hat.
    """
    if max_q < 1 or min_q < 1:
        raise PreconditionError("max_q and min_q must be >= 1")

    if freq.is_rational:
        q0 = freq.denominator
        if min_q <= q0 <= max_q:
            entry = ResonantScale(q=q0, level=freq.depth, log_distance=-math.inf, log_bound=-math.inf, ratio=math.inf)
            return ResonanceLadder(epsilon=0.0, beta_hat=math.inf, max_q=max_q, entries=(entry,), periodic=True)
        return ResonanceLadder(
            epsilon=0.0,
            beta_hat=math.inf,
            max_q=max_q,
            periodic=True,
            diagnostic=f"period {q0} outside [{min_q}, {max_q}]",
        )

    beta = beta if beta is not None else beta_estimate(freq)
    beta_hat = beta.running_max
    epsilon = default_epsilon(beta_hat) if epsilon is None else epsilon
    if not 0 < epsilon < beta_hat:
        raise PreconditionError(
            f"epsilon must satisfy 0 < epsilon < beta_hat={beta_hat:.6g}, got {epsilon}"
        )

    rate = beta_hat - epsilon
    qs = freq.denominators()
    entries: list[ResonantScale] = []
    skipped_uncertified = 0
    for i in range(len(qs) - 1):
        q = qs[i]
        if q > max_q:
            break
        if q < min_q:
            continue
        ratio = math.log(qs[i + 1]) / q
        if ratio < rate:
            continue
        try:
            dist = certified_distance(freq, q)
        except PrecisionError:
            skipped_uncertified += 1
            continue
        log_bound = -rate * q
        if dist.log_value <= log_bound:
            entries.append(
                ResonantScale(q=q, level=i + 1, log_distance=dist.log_value, log_bound=log_bound, ratio=ratio)
            )

    diagnostic = ""
    if not entries:
        diagnostic = f"no convergent denominator in [{min_q}, {max_q}] meets rate {rate:.6g}"
        if skipped_uncertified:
            diagnostic += f" ({skipped_uncertified} uncertifiable)"
        LOGGER.info(diagnostic)

    return ResonanceLadder(
        epsilon=epsilon,
        beta_hat=beta_hat,
        max_q=max_q,
        entries=tuple(entries),
        diagnostic=diagnostic,
    )


__all__ = [
    "DEFAULT_EPSILON_FRACTION",
    "DEFAULT_MAX_Q",
    "ResonanceLadder",
    "ResonantScale",
    "default_epsilon",
    "resonant_scales",
]
