"""Test continued fractions, beta estimates and resonant ladders."""
from __future__ import annotations

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.exceptions import ConfigurationError, OutOfDepthError, PrecisionError, PreconditionError, ScaleBudgetError
from frequency import (
    Frequency,
    beta_estimate,
    certified_distance,
    convergents,
    default_epsilon,
    distance_to_integers,
    from_rational,
    golden_mean,
    liouville_builder,
    parse_frequency_record,
    resonant_scales,
    signed_shift,
)

quotient_lists = st.lists(st.integers(min_value=1, max_value=50), min_size=2, max_size=25)


# =============================================================================
# Convergents
# =============================================================================


def test_golden_mean_denominators_are_fibonacci():
    """Golden mean depth 8 ends at q = 34."""
    freq = golden_mean(8)
    assert freq.denominators() == (1, 2, 3, 5, 8, 13, 21, 34)
    assert convergents(freq, 8)[-1] == (21, 34)


def test_convergents_beyond_depth_raise():
    freq = golden_mean(5)
    with pytest.raises(OutOfDepthError) as exc_info:
        convergents(freq, 6)
    assert exc_info.value.exit_code == 2


def test_from_rational_recovers_value():
    freq = from_rational(5, 13)
    assert freq.is_rational
    assert freq.as_fraction() == Fraction(5, 13)
    assert freq.denominator == 13


def test_from_rational_rejects_out_of_range():
    with pytest.raises(PreconditionError):
        from_rational(3, 2)


def test_zero_quotient_rejected():
    with pytest.raises(PreconditionError):
        Frequency((1, 0, 2))


@given(quotient_lists)
@settings(max_examples=200, deadline=None)
def test_recurrence_identities(quotients):
    """gcd(p, q) = 1 and p_n q_{n-1} - p_{n-1} q_n = (-1)^{n-1}."""
    convs = convergents(Frequency(tuple(quotients)), len(quotients))
    for n, ((p, q), (p_prev, q_prev)) in enumerate(zip(convs[1:], convs), start=2):
        assert math.gcd(p, q) == 1
        assert p * q_prev - p_prev * q == (-1) ** (n - 1)


@given(quotient_lists)
@settings(max_examples=200, deadline=None)
def test_best_approximation_sandwich(quotients):
    """1 / (q_n (q_n + q_{n+1})) < |omega - p_n / q_n| <= 1 / (q_n q_{n+1}) against the deepest value."""
    freq = Frequency(tuple(quotients))
    omega = freq.as_fraction()
    convs = convergents(freq, freq.depth)
    for (p, q), (_, q_next) in zip(convs[:-3], convs[1:-2]):
        gap = abs(omega - Fraction(p, q))
        assert Fraction(1, q * (q + q_next)) < gap <= Fraction(1, q * q_next)


def test_record_round_trip():
    freq = parse_frequency_record("cfrac: 1 2 3 4")
    assert freq.partial_quotients == (1, 2, 3, 4)
    assert parse_frequency_record(freq.record()) == freq
    assert parse_frequency_record("rational: 2/7").as_fraction() == Fraction(2, 7)


def test_bad_record_is_configuration_error():
    with pytest.raises(ConfigurationError):
        parse_frequency_record("cfrac 1 2 3")


# =============================================================================
# Distances
# =============================================================================


def test_distance_of_convergent_denominator_is_small(golden):
    """||q_n omega|| < 1 / q_{n+1}."""
    qs = golden.denominators()
    for q, q_next in zip(qs[:10], qs[1:11]):
        assert distance_to_integers(golden, q) < 1.0 / q_next


def test_rational_distance_is_exactly_zero_at_period(rational_third):
    dist = certified_distance(rational_third, 3)
    assert dist.exact == 0
    assert dist.log_value == -math.inf
    assert signed_shift(rational_third, 3) == 0.0


def test_uncertifiable_distance_raises_precision_error():
    freq = golden_mean(6)
    with pytest.raises(PrecisionError) as exc_info:
        certified_distance(freq, 13)
    assert exc_info.value.required_depth == 7


def test_signed_shift_is_centered(golden):
    for k in range(1, 40):
        shift = signed_shift(golden, k)
        assert -0.5 <= shift <= 0.5
        assert abs(abs(shift) - distance_to_integers(golden, k)) < 1e-15


# =============================================================================
# Beta
# =============================================================================


def test_golden_mean_beta_tail_starts_at_55(golden):
    beta = beta_estimate(golden)
    assert beta.running_max == pytest.approx(math.log(89) / 55)
    assert beta.agreement()


def test_rational_beta_is_infinite(rational_third):
    assert beta_estimate(rational_third).is_infinite


def test_beta_needs_two_levels():
    with pytest.raises(PreconditionError):
        beta_estimate(golden_mean(5), depth=1)


def test_liouville_builder_denominators(liouville):
    """beta = 1 from a_1 = 1: denominators 1, 4, 221."""
    assert liouville.denominators()[:3] == (1, 4, 221)
    assert liouville.partial_quotients[:3] == (1, 3, 55)


@pytest.mark.parametrize("target", [0.5, 1.0, 2.0])
def test_liouville_builder_round_trip(target):
    """r_1 = ln(q_2) / q_1 lands within 15% of the target for q_1 = 60."""
    freq = liouville_builder(target, 2, seed_quotient=60)
    estimate = beta_estimate(freq)
    assert abs(estimate.running_max - target) <= 0.15 * target


def test_liouville_builder_refuses_huge_quotients():
    with pytest.raises(ScaleBudgetError) as exc_info:
        liouville_builder(1.0, 6)
    assert exc_info.value.exit_code == 4


# =============================================================================
# Resonant ladder
# =============================================================================


def test_liouville_ladder(liouville):
    ladder = resonant_scales(liouville, max_q=300)
    assert ladder.scales == (1, 4, 221)
    assert ladder.epsilon == pytest.approx(default_epsilon(ladder.beta_hat))
    for entry in ladder.entries:
        assert entry.log_distance <= entry.log_bound


def test_ladder_respects_max_q(liouville):
    assert resonant_scales(liouville, max_q=100).scales == (1, 4)


def test_rational_ladder_is_periodic(rational_third):
    ladder = resonant_scales(rational_third)
    assert ladder.periodic
    assert ladder.scales == (3,)


def test_golden_ladder_stops_at_55(golden):
    """Beyond q = 55 the ratio ln(q_{n+1}) / q_n drops below beta_hat - eps."""
    ladder = resonant_scales(golden, max_q=200)
    assert ladder.scales == (1, 2, 3, 5, 8, 13, 21, 34, 55)


def test_empty_ladder_carries_diagnostic(golden):
    ladder = resonant_scales(golden, max_q=200, min_q=60)
    assert ladder.is_empty()
    assert "no convergent denominator" in ladder.diagnostic


def test_epsilon_outside_range_raises(golden):
    with pytest.raises(PreconditionError):
        resonant_scales(golden, epsilon=0.1)
