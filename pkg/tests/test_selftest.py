"""Test the self-test suites."""
from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from cocycle import inject_det_fault
from selftest import DET_FAULT_FACTOR, SUITE_NAMES, closed_form, constant_propagator, run_suites
from selftest.suites import order_check, simon_fuzz


@pytest.mark.parametrize("w", [-4.0, 0.0, 2.25])
def test_closed_forms_are_unimodular(w):
    assert np.linalg.det(closed_form(w, 3.0)) == pytest.approx(1.0, abs=1e-12)


def test_closed_form_free_shear():
    np.testing.assert_allclose(closed_form(0.0, 2.5), [[1.0, 0.0], [2.5, 1.0]])


def test_constant_propagator_matches_closed_form():
    np.testing.assert_allclose(constant_propagator(-4.0, 5.0, 1e-3), closed_form(-4.0, 5.0), atol=1e-9)


def test_all_suites_pass_at_defaults():
    results = run_suites(seed=0, fuzz_count=2000)
    assert [r.name for r in results] == list(SUITE_NAMES)
    failed = {r.name: r.detail for r in results if not r.passed}
    assert failed == {}
    assert all(r.duration_ms >= 0 for r in results)


def test_only_runs_requested_suites():
    results = run_suites(only=["closed_forms", "simon_fuzz"], fuzz_count=100)
    assert [r.name for r in results] == ["simon_fuzz", "closed_forms"]


def test_injected_det_fault_fails_wronskian():
    with inject_det_fault(DET_FAULT_FACTOR):
        (result,) = run_suites(only=["wronskian"])
    assert not result.passed
    assert "det" in result.detail


def test_injected_fault_is_reported_not_raised():
    """Suites with the default drift tolerance trip StepSizeError; it becomes a failure."""
    with inject_det_fault(DET_FAULT_FACTOR):
        (result,) = run_suites(only=["closed_forms"])
    assert not result.passed
    assert "StepSizeError" in result.detail


def test_order_check_observes_fourth_order():
    result = order_check()
    assert result.passed
    assert "observed order" in result.detail


def test_order_check_degrades_at_coarse_step():
    result = order_check(h=0.1)
    assert not result.passed
    assert "degraded order" in result.detail


def test_simon_fuzz_reports_smallest_maximum():
    result = simon_fuzz(seed=7, count=500)
    assert result.passed
    smallest = float(result.detail.rsplit(" ", 1)[-1])
    assert smallest >= 0.25 - 1e-9
    assert result.to_dict()["name"] == "simon_fuzz"
    assert math.isfinite(smallest)
