"""Estimates of the Liouville exponent beta(omega) and the Liouville builder."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional

import mpmath

from core.exceptions import OutOfDepthError, PreconditionError, ScaleBudgetError
from core.logging_config import get_logger
from frequency.continued_fraction import Frequency, _reference_distance

LOGGER = get_logger(__name__)

# Levels with q_n below this are transient and excluded from the running max
DEFAULT_TAIL_MIN_Q = 50

# Largest partial quotient the builder will materialize
DEFAULT_MAX_QUOTIENT_BITS = 200_000

# Extra decimal digits carried when evaluating ceil(exp(x))
_GUARD_DIGITS = 30

AGREEMENT_SLACK = 1e-12


@dataclass(frozen=True)
class BetaEstimate:
    """
    Finite-depth estimate of beta(omega).

    ``ratios[i]`` is r_n = ln(q_{n+1}) / q_n for level n = i + 1. The running
    max is taken over the tail of levels with q_n >= the tail threshold, or
    the deepest ratio when the tail is empty. ``direct`` holds
    -ln||q_n omega|| / q_n for the same levels; ``direct_error`` the bound
    ln(1 + q_n / q_{n+1}) / q_n on its gap to r_n.
    """

    ratios: tuple[float, ...]
    denominators: tuple[int, ...]
    running_max: float
    depth: int
    tail_start: int
    direct: tuple[float, ...] = ()
    direct_error: tuple[float, ...] = ()

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.running_max)

    def agreement(self) -> bool:
        """True when every direct value sits within its bound of r_n."""
        return all(
            abs(d - r) <= err + AGREEMENT_SLACK
            for d, r, err in zip(self.direct, self.ratios, self.direct_error)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "running_max": self.running_max,
            "depth": self.depth,
            "tail_start": self.tail_start,
            "ratios": list(self.ratios),
        }


def beta_estimate(
    freq: Frequency,
    depth: Optional[int] = None,
    tail_min_q: int = DEFAULT_TAIL_MIN_Q,
) -> BetaEstimate:
    """
    Estimate beta(omega) from the first ``depth`` convergents.

    Exact rationals return the +inf sentinel (q_{n+1} does not exist).

    Raises:
        PreconditionError: If depth < 2.
        OutOfDepthError: If depth exceeds the stored quotients.
    """
    depth = freq.depth if depth is None else depth
    if freq.is_rational:
        return BetaEstimate(
            ratios=(),
            denominators=freq.denominators(),
            running_max=math.inf,
            depth=freq.depth,
            tail_start=0,
        )
    if depth < 2:
        raise PreconditionError(f"beta_estimate needs depth >= 2, got {depth}")
    if depth > freq.depth:
        raise OutOfDepthError(depth, freq.depth)

    qs = freq.denominators()[:depth]
    ratios = tuple(math.log(qs[i + 1]) / qs[i] for i in range(depth - 1))

    tail = [i for i in range(depth - 1) if qs[i] >= tail_min_q]
    tail_start = tail[0] if tail else depth - 2
    running_max = max(ratios[tail_start:])

    direct = []
    direct_error = []
    for i in range(depth - 1):
        dist: Fraction = _reference_distance(freq, qs[i])
        log_dist = math.log(dist.numerator) - math.log(dist.denominator)
        direct.append(-log_dist / qs[i])
        direct_error.append(math.log1p(qs[i] / qs[i + 1]) / qs[i])

    return BetaEstimate(
        ratios=ratios,
        denominators=qs,
        running_max=running_max,
        depth=depth,
        tail_start=tail_start + 1,
        direct=tuple(direct),
        direct_error=tuple(direct_error),
    )


def _ceil_exp(beta: float, q: int) -> int:
    """ceil(exp(beta * q)) exactly, at a working precision sized to the result."""
    digits = int(beta * q / math.log(10)) + _GUARD_DIGITS
    with mpmath.workdps(digits):
        value = mpmath.exp(mpmath.mpf(beta) * q)
        return int(mpmath.ceil(value))


def liouville_builder(
    target_beta: float,
    depth: int,
    seed_quotient: int = 1,
    max_quotient_bits: int = DEFAULT_MAX_QUOTIENT_BITS,
) -> Frequency:
    """
    Build omega with a_{n+1} = ceil(exp(target_beta * q_n)).

    Raises:
        PreconditionError: For target_beta <= 0, depth < 2 or seed < 1.
        ScaleBudgetError: When the next quotient would exceed the bit budget.
    """
    if not target_beta > 0:
        raise PreconditionError(f"target beta must be > 0, got {target_beta}")
    if depth < 2:
        raise PreconditionError(f"liouville_builder needs depth >= 2, got {depth}")
    if seed_quotient < 1:
        raise PreconditionError("seed quotient must be >= 1")

    quotients = [seed_quotient]
    q_prev, q = 1, seed_quotient
    while len(quotients) < depth:
        bits = target_beta * q / math.log(2)
        if bits > max_quotient_bits:
            raise ScaleBudgetError(
                f"next quotient needs ~{bits:.0f} bits (budget {max_quotient_bits}); "
                f"stopped at depth {len(quotients)}",
                achieved_depth=len(quotients),
            )
        a = _ceil_exp(target_beta, q)
        quotients.append(a)
        q_prev, q = q, a * q + q_prev

    LOGGER.debug(
        "Built Liouville frequency",
        extra={"extra_data": {"beta": target_beta, "depth": depth, "q_bits": q.bit_length()}},
    )
    return Frequency(tuple(quotients))


__all__ = [
    "DEFAULT_MAX_QUOTIENT_BITS",
    "DEFAULT_TAIL_MIN_Q",
    "BetaEstimate",
    "beta_estimate",
    "liouville_builder",
]
