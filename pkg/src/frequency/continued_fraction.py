"""Exact continued-fraction arithmetic for the frequency omega.

omega = [0; a1, a2, ..., aN] lives in (0, 1) and is only ever specified by
its partial quotients. Distances ||k omega|| are computed from integers
against the deepest stored convergent, with a certified truncation bound.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from core.exceptions import (
    ConfigurationError,
    OutOfDepthError,
    PrecisionError,
    PreconditionError,
)
from core.logging_config import get_logger

LOGGER = get_logger(__name__)

# Relative truncation error accepted by distance_to_integers
CERTIFICATION_RATIO = Fraction(1, 1000)

_CFRAC_RECORD = re.compile(r"^\s*cfrac\s*:\s*(?P<body>[\d\s]+)$")
_RATIONAL_RECORD = re.compile(r"^\s*rational\s*:\s*(?P<p>\d+)\s*/\s*(?P<q>\d+)\s*$")


class FrequencyKind(str, Enum):
    """How the stored quotients relate to omega."""

    IRRATIONAL_TRUNCATION = "irrational-truncation"
    EXACT_RATIONAL = "exact-rational"


@dataclass(frozen=True)
class Frequency:
    """Frequency handle: partial quotients plus cached convergents."""

    partial_quotients: tuple[int, ...]
    kind: FrequencyKind = FrequencyKind.IRRATIONAL_TRUNCATION
    _convergents: tuple[tuple[int, int], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        quotients = tuple(int(a) for a in self.partial_quotients)
        if not quotients:
            raise PreconditionError("a frequency needs at least one partial quotient")
        bad = [a for a in quotients if a < 1]
        if bad:
            raise PreconditionError(f"partial quotients must be >= 1, got {bad[0]}")
        object.__setattr__(self, "partial_quotients", quotients)
        object.__setattr__(self, "_convergents", _run_recurrence(quotients))

    @property
    def depth(self) -> int:
        """Number of stored partial quotients."""
        return len(self.partial_quotients)

    @property
    def is_rational(self) -> bool:
        return self.kind is FrequencyKind.EXACT_RATIONAL

    @property
    def deepest(self) -> tuple[int, int]:
        """The deepest convergent (p_N, q_N)."""
        return self._convergents[-1]

    @property
    def denominator(self) -> int:
        return self._convergents[-1][1]

    def as_fraction(self) -> Fraction:
        """omega as used by the numerics: p_N / q_N."""
        p, q = self.deepest
        return Fraction(p, q)

    @property
    def omega(self) -> float:
        """Double-precision value of omega."""
        return float(self.as_fraction())

    def denominators(self) -> tuple[int, ...]:
        return tuple(q for _, q in self._convergents)

    def record(self) -> str:
        """Plain-text record understood by ``parse_frequency_record``."""
        if self.is_rational:
            p, q = self.deepest
            return f"rational: {p}/{q}"
        return "cfrac: " + " ".join(str(a) for a in self.partial_quotients)


def _run_recurrence(quotients: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2}; seeds (0,1), (1,0)."""
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    out = []
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return tuple(out)


# =============================================================================
# Constructors
# =============================================================================


def golden_mean(depth: int) -> Frequency:
    """(sqrt(5) - 1) / 2 truncated after ``depth`` quotients."""
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    return Frequency(tuple([1] * depth))


def from_rational(p: int, q: int) -> Frequency:
    """Exact rational frequency p/q with 0 < p < q."""
    if not 0 < p < q:
        raise PreconditionError(f"rational frequency needs 0 < p < q, got {p}/{q}")
    x = Fraction(p, q)
    quotients: list[int] = []
    while x:
        x = 1 / x
        a = math.floor(x)
        quotients.append(a)
        x -= a
    return Frequency(tuple(quotients), FrequencyKind.EXACT_RATIONAL)


def parse_frequency_record(text: str) -> Frequency:
    """
    Parse ``cfrac: a1 a2 ...`` or ``rational: p/q``.

    Raises:
        ConfigurationError: For any other shape.
    """
    match = _CFRAC_RECORD.match(text)
    if match:
        quotients = tuple(int(tok) for tok in match.group("body").split())
        if not quotients:
            raise ConfigurationError("cfrac record has no quotients")
        return Frequency(quotients)
    match = _RATIONAL_RECORD.match(text)
    if match:
        return from_rational(int(match.group("p")), int(match.group("q")))
    raise ConfigurationError(f"unrecognised frequency record: {text!r}")


# =============================================================================
# Operations
# =============================================================================


def convergents(freq: Frequency, depth: int) -> list[tuple[int, int]]:
    """
    Return the first ``depth`` convergents (p_n, q_n), n = 1..depth.

    Raises:
        OutOfDepthError: If depth exceeds the stored quotients.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    if depth > freq.depth:
        raise OutOfDepthError(depth, freq.depth)
    return list(freq._convergents[:depth])


@dataclass(frozen=True)
class CertifiedDistance:
    """||k omega|| as an exact fraction of the reference convergent plus its error bound."""

    k: int
    exact: Fraction
    error_bound: Fraction

    @property
    def value(self) -> float:
        return float(self.exact)

    @property
    def log_value(self) -> float:
        """ln ||k omega||, exact for huge denominators; -inf when the distance is zero."""
        if self.exact == 0:
            return -math.inf
        return math.log(self.exact.numerator) - math.log(self.exact.denominator)

    def __float__(self) -> float:
        return self.value


def _reference_distance(freq: Frequency, k: int) -> Fraction:
    p, q = freq.deepest
    r = (k * p) % q
    return Fraction(min(r, q - r), q)


def certified_distance(freq: Frequency, k: int) -> CertifiedDistance:
    """
    ||k omega|| against the deepest convergent, with a certified error bound.

    For a truncated irrational the tail can move omega by less than
    1 / (q_N (q_N + q_{N-1})), so ||k omega|| moves by at most k times that.

    Raises:
        PreconditionError: If k < 1.
        PrecisionError: If the bound exceeds 1e-3 of the value.
    """
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    exact = _reference_distance(freq, k)
    if freq.is_rational:
        return CertifiedDistance(k=k, exact=exact, error_bound=Fraction(0))

    q_n = freq.denominator
    q_prev = freq._convergents[-2][1] if freq.depth > 1 else 1
    error_bound = Fraction(k, q_n * (q_n + q_prev))
    if error_bound > CERTIFICATION_RATIO * exact:
        raise PrecisionError(
            f"||{k} omega|| cannot be certified with {freq.depth} quotients "
            f"(truncation bound {float(error_bound):.3e})",
            required_depth=freq.depth + 1,
        )
    return CertifiedDistance(k=k, exact=exact, error_bound=error_bound)


def distance_to_integers(freq: Frequency, k: int) -> float:
    """||k omega|| = dist(k omega, Z) as a float in [0, 1/2]."""
    return certified_distance(freq, k).value


def signed_shift(freq: Frequency, k: int) -> float:
    """
    Signed fractional part of k*omega in [-1/2, 1/2].

    The numerics use omega(t + k) = omega t + shift (mod 1); the shift is
    taken from integers so it keeps full relative accuracy when tiny.
    """
    p, q = freq.deepest
    r = (k * p) % q
    if 2 * r > q:
        r -= q
    return float(Fraction(r, q))


__all__ = [
    "CERTIFICATION_RATIO",
    "CertifiedDistance",
    "Frequency",
    "FrequencyKind",
    "certified_distance",
    "convergents",
    "distance_to_integers",
    "from_rational",
    "golden_mean",
    "parse_frequency_record",
    "signed_shift",
]
