"""Test Lyapunov estimates, scans and the growth-rate check."""
from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.exceptions import PreconditionError
from lyapunov import burn_in, coupling_scan, growth_bound_check, lyapunov, lyapunov_scan
from potential import builtin_model

# Constant potentials are integrated exactly enough at the coarsest allowed step
COARSE = 1e-2


def test_free_scan_matches_sqrt_law(golden, free):
    """V = 0: L(E) = sqrt(max(-E, 0))."""
    estimates = lyapunov_scan(free, golden, [-4.0, -1.0, 1.0], n_phases=2, h=COARSE)
    assert [e.energy for e in estimates] == [-4.0, -1.0, 1.0]
    for est, expected in zip(estimates, [2.0, 1.0, 0.0]):
        assert est.l_hat == pytest.approx(expected, abs=1e-2)


def test_constant_potential_scan(golden):
    """V = 2 on five energies in [-2, 2], including the parabolic point E = 2."""
    spec = builtin_model("constant", [2.0])
    grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
    estimates = lyapunov_scan(spec, golden, grid, n_phases=2, h=COARSE)
    for est in estimates:
        assert est.l_hat == pytest.approx(math.sqrt(max(2.0 - est.energy, 0.0)), abs=1e-2)


def test_scan_order_independent_of_threads(golden, cosine):
    grid = [-0.5, 0.0, 0.5, 1.0]
    sequential = lyapunov_scan(cosine, golden, grid, length=20, n_phases=2, h=COARSE, threads=1)
    pooled = lyapunov_scan(cosine, golden, grid, length=20, n_phases=2, h=COARSE, threads=3)
    assert [e.to_row() for e in sequential] == [e.to_row() for e in pooled]


def test_scan_rejects_bad_grids(golden, free):
    with pytest.raises(PreconditionError):
        lyapunov_scan(free, golden, [])
    with pytest.raises(PreconditionError, match="sorted"):
        lyapunov_scan(free, golden, [1.0, 0.0])


def test_short_length_and_no_phases_rejected(golden, free):
    with pytest.raises(PreconditionError):
        lyapunov(free, golden, 0.0, length=5)
    with pytest.raises(PreconditionError):
        lyapunov(free, golden, 0.0, length=20, n_phases=0)


def test_single_phase_has_zero_stderr(golden, free):
    est = lyapunov(free, golden, -1.0, length=20, n_phases=1, h=COARSE)
    assert est.stderr == 0.0
    assert est.spread == 0.0
    assert est.to_row()["n_phases"] == 1


@pytest.fixture(scope="module")
def hyperbolic_estimates(golden, cosine):
    """cos(2 pi y) + 1.5 > 0 everywhere: E = -1.5 is uniformly hyperbolic."""
    return [lyapunov(cosine, golden, -1.5, length=n, n_phases=8, h=COARSE) for n in (200.0, 400.0)]


def test_phase_estimates_agree(hyperbolic_estimates):
    est = hyperbolic_estimates[0]
    assert est.l_hat > 0.5
    # per-phase standard deviation is stderr * sqrt(n_phases)
    assert est.spread <= 5.0 * est.stderr * math.sqrt(est.n_phases)
    assert est.spread <= 0.05


def test_doubling_length_keeps_l_hat(hyperbolic_estimates):
    short, long = hyperbolic_estimates
    assert abs(long.l_hat - short.l_hat) <= 2.0 * max(short.stderr, long.stderr) + 0.02


def test_l_hat_is_never_far_below_zero(golden, free):
    est = lyapunov(free, golden, 3.0, length=20, n_phases=2, h=COARSE)
    assert est.l_hat >= -1e-3


def test_burn_in_has_unit_floor():
    assert burn_in(2.0) == 1.0
    assert burn_in(200.0) == pytest.approx(50.0)


def test_growth_check_on_free_hyperbolic_energy(golden, free):
    """||T(-1, 0, x)|| = e^x exactly, so the fitted slope is 1."""
    estimate = lyapunov(free, golden, -1.0, length=50, n_phases=2, h=COARSE)
    check = growth_bound_check(free, golden, -1.0, [10.0, 20.0, 40.0], h=COARSE, estimate=estimate)
    assert check.slope == pytest.approx(1.0, abs=1e-6)
    assert check.passed
    assert max(abs(r) for r in check.residuals) < 1e-6
    assert check.to_dict()["passed"] is True


def test_growth_check_needs_increasing_lengths(golden, free):
    with pytest.raises(PreconditionError):
        growth_bound_check(free, golden, -1.0, [10.0, 20.0])
    with pytest.raises(PreconditionError):
        growth_bound_check(free, golden, -1.0, [10.0, 10.0, 20.0])


def test_coupling_scan_constant_family(golden):
    """V = lambda at E = 0: L = sqrt(lambda)."""
    results = coupling_scan("constant", golden, 0.0, [0.0, 1.0, 4.0], length=200, n_phases=1, h=COARSE)
    assert [lam for lam, _ in results] == [0.0, 1.0, 4.0]
    for lam, est in results:
        assert est.l_hat == pytest.approx(math.sqrt(lam), abs=1e-2)


def test_coupling_scan_rejects_empty_list(golden):
    with pytest.raises(PreconditionError):
        coupling_scan("constant", golden, 0.0, [])
