"""Frequency arithmetic: convergents, ||k omega||, beta estimates and resonant ladders."""
from __future__ import annotations

from frequency.beta import (
    DEFAULT_MAX_QUOTIENT_BITS,
    DEFAULT_TAIL_MIN_Q,
    BetaEstimate,
    beta_estimate,
    liouville_builder,
)
from frequency.continued_fraction import (
    CertifiedDistance,
    Frequency,
    FrequencyKind,
    certified_distance,
    convergents,
    distance_to_integers,
    from_rational,
    golden_mean,
    parse_frequency_record,
    signed_shift,
)
from frequency.resonance import (
    DEFAULT_MAX_Q,
    ResonanceLadder,
    ResonantScale,
    default_epsilon,
    resonant_scales,
)

__all__ = [
    "DEFAULT_MAX_Q",
    "DEFAULT_MAX_QUOTIENT_BITS",
    "DEFAULT_TAIL_MIN_Q",
    "BetaEstimate",
    "CertifiedDistance",
    "Frequency",
    "FrequencyKind",
    "ResonanceLadder",
    "ResonantScale",
    "beta_estimate",
    "certified_distance",
    "convergents",
    "default_epsilon",
    "distance_to_integers",
    "from_rational",
    "golden_mean",
    "liouville_builder",
    "parse_frequency_record",
    "resonant_scales",
    "signed_shift",
]
