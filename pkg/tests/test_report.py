"""Test regime checks, the scale budget and exclusion verdicts."""
from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.exceptions import PreconditionError, ScaleBudgetError
from frequency import from_rational, resonant_scales
from gordon import (
    Verdict,
    check_scale_budget,
    exclusion_report,
    exclusion_scan,
    in_regime,
    regime_energies,
    regime_threshold,
)
from lyapunov import LyapunovEstimate
from potential import builtin_model


def fixed_estimate(energy: float, l_hat: float, stderr: float = 0.0) -> LyapunovEstimate:
    return LyapunovEstimate(
        energy=energy, l_hat=l_hat, length=200.0, n_phases=8, stderr=stderr, per_phase=(l_hat,) * 8
    )


@pytest.fixture(scope="module")
def liouville_ladder(liouville):
    return resonant_scales(liouville, max_q=300)


# =============================================================================
# Regime
# =============================================================================


def test_regime_threshold():
    assert regime_threshold(0.5, 1.0, 0.1) == pytest.approx(0.4)
    assert math.isinf(regime_threshold(1.0, math.inf, 0.0))


def test_in_regime_counts_three_stderr():
    assert in_regime(fixed_estimate(0.0, 0.5, stderr=0.1), 1.0, 1.0, 0.0)
    assert not in_regime(fixed_estimate(0.0, 0.5, stderr=0.2), 1.0, 1.0, 0.0)


def test_regime_energies_filters_scan():
    scan = [fixed_estimate(-1.0, 1.2), fixed_estimate(0.0, 0.3), fixed_estimate(1.0, 0.0)]
    assert regime_energies(scan, 1.0, 1.0) == [0.0, 1.0]
    assert regime_energies(scan, 1.0, 1.0, margin=0.8) == [1.0]


# =============================================================================
# Scale budget
# =============================================================================


def test_scale_budget_accepts_liouville_ladder(liouville_ladder):
    check_scale_budget(liouville_ladder, 0.0)


def test_scale_budget_names_offending_scale(liouville_ladder):
    with pytest.raises(ScaleBudgetError) as exc_info:
        check_scale_budget(liouville_ladder, 5.0)
    assert exc_info.value.scale == 221
    assert exc_info.value.exit_code == 4


def test_regime_check_comes_before_scale_budget(liouville, liouville_ladder, free):
    """L_hat = sqrt(5) would blow the budget at q = 221, but the energy is out of regime."""
    estimate = fixed_estimate(-5.0, math.sqrt(5.0))
    report = exclusion_report(free, liouville, -5.0, liouville_ladder, estimate)
    assert report.verdict is Verdict.REGIME_NOT_MET
    assert report.records == ()


def test_in_regime_energy_beyond_budget_raises():
    """Periodic ladders are always in regime; 3 * 250 / ln 10 is past 300 decades."""
    rational = from_rational(1, 250)
    ladder = resonant_scales(rational, max_q=300)
    with pytest.raises(ScaleBudgetError) as exc_info:
        exclusion_report(builtin_model("constant", [0.0]), rational, 0.5, ladder, fixed_estimate(0.5, 3.0))
    assert exc_info.value.scale == 250


# =============================================================================
# Verdicts
# =============================================================================


@pytest.mark.parametrize("energy", [0.5, 1.0])
def test_free_liouville_energies_are_excluded_consistent(liouville, liouville_ladder, free, energy):
    report = exclusion_report(free, liouville, energy, liouville_ladder, fixed_estimate(energy, 0.0), n_phi=8)
    assert report.verdict is Verdict.EXCLUDED_CONSISTENT
    assert [r.q for r in report.records] == [1, 4, 221]
    assert all(r.d1 == 0.0 and r.d2 == 0.0 for r in report.records)
    assert all(r.three_block_max >= 0.125 for r in report.records)
    assert report.to_dict()["verdict"] == "excluded-consistent"


def test_positive_lyapunov_in_regime_is_excluded_consistent(liouville, liouville_ladder):
    """V = 0.09 at E = 0: L = 0.3 < beta_hat, so the large scale 221 must not trip the step check."""
    spec = builtin_model("constant", [0.09])
    report = exclusion_report(spec, liouville, 0.0, liouville_ladder, fixed_estimate(0.0, 0.3), n_phi=8)
    assert report.verdict is Verdict.EXCLUDED_CONSISTENT, report.reason
    assert [r.q for r in report.records] == [1, 4, 221]


def test_larger_margin_never_raises_the_verdict(liouville, free):
    ladder = resonant_scales(liouville, max_q=10)
    ranks = [
        exclusion_report(free, liouville, 0.5, ladder, fixed_estimate(0.5, 0.0), margin=m, n_phi=4).verdict.rank
        for m in (0.0, 0.5, 2.0)
    ]
    assert ranks == sorted(ranks, reverse=True)
    assert ranks[0] == Verdict.EXCLUDED_CONSISTENT.rank
    assert ranks[-1] == Verdict.REGIME_NOT_MET.rank


def test_large_lyapunov_is_regime_not_met(golden, cosine):
    ladder = resonant_scales(golden, max_q=200)
    report = exclusion_report(cosine, golden, 0.5, ladder, fixed_estimate(0.5, 0.5))
    assert report.verdict is Verdict.REGIME_NOT_MET
    assert report.records == ()
    assert ">=" in report.reason


def test_golden_cosine_is_never_excluded(golden, cosine):
    """Golden mean beta_hat is too small for the defects to close at small scales."""
    ladder = resonant_scales(golden, max_q=10)
    report = exclusion_report(cosine, golden, 0.5, ladder, fixed_estimate(0.5, 0.0), n_phi=8)
    assert report.verdict in (Verdict.INCONCLUSIVE, Verdict.REGIME_NOT_MET)
    assert report.reason


def test_empty_ladder_is_inconclusive(golden, cosine):
    ladder = resonant_scales(golden, max_q=200, min_q=60)
    report = exclusion_report(cosine, golden, 0.5, ladder, fixed_estimate(0.5, 0.0))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert "empty ladder" in report.reason


def test_verdict_rank_orders_outcomes():
    assert Verdict.EXCLUDED_CONSISTENT.rank > Verdict.INCONCLUSIVE.rank > Verdict.REGIME_NOT_MET.rank


# =============================================================================
# Scans
# =============================================================================


def test_exclusion_scan_keeps_estimate_order(liouville, liouville_ladder, free):
    small = resonant_scales(liouville, max_q=10)
    estimates = [fixed_estimate(e, 0.0) for e in (1.0, 0.5, 2.0)]
    reports = exclusion_scan(free, liouville, estimates, small, n_phi=4, threads=3)
    assert [r.energy for r in reports] == [1.0, 0.5, 2.0]


def test_exclusion_scan_checks_in_regime_budget_before_any_work(mocker, free):
    spy = mocker.patch("gordon.report.exclusion_report")
    rational = from_rational(1, 250)
    ladder = resonant_scales(rational, max_q=300)
    estimates = [fixed_estimate(0.5, 0.0), fixed_estimate(1.0, 3.0)]
    with pytest.raises(ScaleBudgetError):
        exclusion_scan(free, rational, estimates, ladder)
    spy.assert_not_called()


def test_exclusion_scan_skips_budget_outside_regime(mocker, liouville, liouville_ladder, free):
    spy = mocker.patch("gordon.report.exclusion_report")
    estimates = [fixed_estimate(0.5, 0.0), fixed_estimate(-25.0, 5.0)]
    exclusion_scan(free, liouville, estimates, liouville_ladder, threads=1)
    assert spy.call_count == 2


def test_exclusion_scan_rejects_zero_threads(liouville, liouville_ladder, free):
    with pytest.raises(PreconditionError):
        exclusion_scan(free, liouville, [fixed_estimate(0.5, 0.0)], liouville_ladder, threads=0)
