"""Test SL(2,R) algebra, the integrator and transfer matrices."""
from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from cocycle import (
    SL2,
    StateVec,
    TransferRequest,
    inject_det_fault,
    log_norm,
    matrix_norm,
    operator_norm,
    ordered_product,
    panel_steps,
    propagate,
    segment_products,
    simon_bound_check,
    simon_maxima,
    sl2_inverse,
    transfer,
    transfer_batch,
    unit_blocks,
)
from core.exceptions import IntegrityError, LemmaViolationError, PreconditionError, StepSizeError
from potential import builtin_model
from selftest import closed_form


def rotation(t: float) -> np.ndarray:
    return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


def random_sl2(a: float, b: float, log_s: float) -> np.ndarray:
    return rotation(a) @ np.diag([math.exp(log_s), math.exp(-log_s)]) @ rotation(b)


angles = st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False)
log_stretch = st.floats(min_value=-8.0, max_value=8.0, allow_nan=False)


# =============================================================================
# SL2 algebra
# =============================================================================


def test_matrix_norm_closed_form():
    assert matrix_norm(np.diag([3.0, 1.0 / 3.0])) == pytest.approx(3.0)
    assert matrix_norm(rotation(0.7)) == pytest.approx(1.0)
    batch = matrix_norm(np.stack([np.eye(2), 2.0 * np.eye(2)]))
    np.testing.assert_allclose(batch, [1.0, 2.0])


@given(angles, angles, log_stretch)
@settings(max_examples=100, deadline=None)
def test_matrix_norm_matches_svd(a, b, s):
    m = random_sl2(a, b, s)
    assert matrix_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False)[0], rel=1e-9)


@pytest.mark.parametrize("t", [0.0, 0.3, 2.984375])
def test_matrix_norm_nearly_conformal(t):
    """A rotation times diag(k, 1/k) with k a hair above 1 has norm exactly k."""
    k = 1.0 + 1e-8
    m = rotation(t) @ np.diag([k, 1.0 / k]) @ rotation(t)
    assert matrix_norm(m) == pytest.approx(k, rel=1e-13)


def test_matrix_norm_rejects_non_finite():
    with pytest.raises(IntegrityError):
        matrix_norm(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_from_array_rejects_non_unimodular():
    with pytest.raises(IntegrityError):
        SL2.from_array(np.array([[2.0, 0.0], [0.0, 1.0]]))


def test_from_array_renormalizes_large_entries():
    b = SL2.from_array(np.diag([1e5, 1e-5]))
    assert b.log_scale == pytest.approx(math.log(1e5))
    assert 1.0 <= matrix_norm(b.array) <= 1e4
    np.testing.assert_allclose(b.scaled_array(), np.diag([1e5, 1e-5]), rtol=1e-12)


def test_inverse_keeps_log_scale_and_cancels():
    """diag(e^50, e^-50) stored as e^50 * diag(1, e^-100)."""
    b = SL2((1.0, 0.0, 0.0, math.exp(-100.0)), log_scale=50.0)
    inv = sl2_inverse(b)
    assert inv.log_scale == b.log_scale
    np.testing.assert_allclose((b @ inv).scaled_array(), np.eye(2), atol=1e-12)


def test_inverse_refuses_drifted_matrix():
    with pytest.raises(IntegrityError):
        sl2_inverse(SL2((1.0, 0.0, 0.0, 1.0), det_drift=1e-3))


def test_huge_log_norm_does_not_overflow():
    b = SL2((1.0, 0.0, 0.0, 0.0), log_scale=1000.0)
    assert log_norm(b) == pytest.approx(1000.0)
    assert operator_norm(b) == math.inf


def test_zero_state_needs_explicit_flag():
    with pytest.raises(PreconditionError):
        StateVec(0.0, 0.0)
    assert StateVec(0.0, 0.0, zero_solution=True).norm == 0.0


def test_propagate_accumulates_scale():
    b = SL2((2.0, 0.0, 0.0, 0.5), log_scale=10.0)
    out = propagate(StateVec(1.0, 0.0), b)
    assert out.log_norm == pytest.approx(10.0 + math.log(2.0))
    assert math.hypot(out.du, out.u) == pytest.approx(1.0)


def test_simon_bound_on_cosh_block():
    """||B phi|| = ||(sinh 3, cosh 3)|| for B the free transfer over length 3 at c - E = 1."""
    b = SL2.from_array(closed_form(1.0, 3.0))
    check = simon_bound_check(b, StateVec(0.0, 1.0))
    assert check.norm_b == pytest.approx(math.hypot(math.sinh(3.0), math.cosh(3.0)))
    assert check.maximum >= 0.125
    assert check.to_dict()["achieved_by"] == "B^2"


def test_simon_bound_requires_unit_phi():
    with pytest.raises(PreconditionError):
        simon_bound_check(SL2.identity(), StateVec(2.0, 0.0))


@given(angles, angles, log_stretch, angles)
@settings(max_examples=300, deadline=None)
def test_simon_bound_holds(a, b, s, theta):
    check = simon_bound_check(SL2.from_array(random_sl2(a, b, s)), StateVec.from_angle(theta))
    assert check.maximum >= 0.25 - 1e-12


def test_simon_check_flags_corrupted_matrix():
    """0.01 I is not unimodular but carries no drift record; the bound catches it."""
    with pytest.raises(LemmaViolationError):
        simon_bound_check(SL2((0.01, 0.0, 0.0, 0.01)), StateVec(1.0, 0.0))


def test_simon_maxima_matches_scalar_check():
    rng = np.random.default_rng(5)
    mats = np.stack([random_sl2(*rng.uniform(0, 6, 2), rng.uniform(-4, 4)) for _ in range(20)])
    theta = rng.uniform(0, 2 * math.pi, 20)
    phis = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    fast = simon_maxima(mats, phis)
    slow = [simon_bound_check(SL2.from_array(m), StateVec(*p)).maximum for m, p in zip(mats, phis)]
    np.testing.assert_allclose(fast, slow, rtol=1e-9)


# =============================================================================
# Integrator
# =============================================================================


def test_panel_steps_respect_h_and_parity():
    grid = panel_steps(np.array([0.0, 0.35, 1.0]), 0.1)
    assert list(grid.counts) == [4, 7]
    assert np.all(np.abs(grid.step) <= 0.1 + 1e-15)
    even = panel_steps(np.array([0.0, 0.35, 1.0]), 0.1, even=True)
    assert list(even.counts) == [4, 8]


def test_panel_steps_backwards():
    grid = panel_steps(np.array([1.0, 0.0]), 0.25)
    assert np.all(grid.step < 0)
    assert grid.size == 4


def test_segment_products_match_loop():
    rng = np.random.default_rng(1)
    mats = rng.normal(size=(7, 2, 2))
    counts = np.array([3, 1, 3])
    out = segment_products(mats, counts)
    expected_first = mats[2] @ mats[1] @ mats[0]
    np.testing.assert_allclose(out[0], expected_first)
    np.testing.assert_allclose(out[1], mats[3])
    np.testing.assert_allclose(ordered_product(mats[4:]), mats[6] @ mats[5] @ mats[4])


def test_unit_blocks():
    assert unit_blocks(0.0, 2.5) == [(0.0, 1.0), (1.0, 2.0), (2.0, 2.5)]
    assert unit_blocks(1.0, -0.5) == [(1.0, 0.0), (0.0, -0.5)]
    assert unit_blocks(3.0, 3.0) == []


# =============================================================================
# Transfer matrices
# =============================================================================


def test_free_transfer_matches_cosh(golden, free):
    t = transfer(free, golden, TransferRequest(-1.0, 0.0, 1.0))
    expected = np.array([[math.cosh(1.0), math.sinh(1.0)], [math.sinh(1.0), math.cosh(1.0)]])
    np.testing.assert_allclose(t.scaled_array(), expected, atol=1e-8)


def test_harmonic_transfer_matches_closed_form(golden):
    spec = builtin_model("constant", [1.0])
    t = transfer(spec, golden, TransferRequest(5.0, 0.0, 10.0))
    np.testing.assert_allclose(t.scaled_array(), closed_form(-4.0, 10.0), atol=1e-8)


def test_reverse_interval_gives_inverse(golden, cosine):
    forward = transfer(cosine, golden, TransferRequest(0.4, 0.0, 2.0))
    backward = transfer(cosine, golden, TransferRequest(0.4, 2.0, 0.0))
    np.testing.assert_allclose((backward @ forward).scaled_array(), np.eye(2), atol=1e-8)


@pytest.mark.parametrize("model", ["cosine", "sawtooth"])
def test_cocycle_identity(golden, model):
    spec = builtin_model(model, [1.0])
    req = TransferRequest(-0.2, 0.0, 6.3)
    whole = transfer(spec, golden, req)
    split = transfer(spec, golden, req.interval(2.9, 6.3)) @ transfer(spec, golden, req.interval(0.0, 2.9))
    np.testing.assert_allclose(split.scaled_array(), whole.scaled_array(), rtol=1e-8, atol=1e-10)


def test_long_transfer_stays_unimodular(golden, cosine):
    t = transfer(cosine, golden, TransferRequest(-1.5, 0.0, 200.0))
    assert abs(t.det_drift) <= 1e-8
    assert t.log_scale > 10.0


def test_separable_transfer_stays_unimodular(golden, sample_table):
    spec = builtin_model("separable", [0.5], table=sample_table)
    t = transfer(spec, golden, TransferRequest(0.3, 0.0, 50.0))
    assert abs(t.det_drift) <= 1e-8


def test_alignment_restores_accuracy_on_jumps(golden, sawtooth):
    reference = transfer(sawtooth, golden, TransferRequest(0.2, 0.0, 10.0, h=2.5e-4)).scaled_array()
    aligned = transfer(sawtooth, golden, TransferRequest(0.2, 0.0, 10.0, h=1e-2, tolerance=1.0)).scaled_array()
    loose = transfer(
        sawtooth, golden, TransferRequest(0.2, 0.0, 10.0, h=1e-2, tolerance=1.0), align_breakpoints=False
    ).scaled_array()
    aligned_error = np.abs(aligned - reference).max()
    loose_error = np.abs(loose - reference).max()
    assert aligned_error * 10 < loose_error


def test_injected_fault_trips_step_size_error(golden, cosine):
    with inject_det_fault(1.01):
        with pytest.raises(StepSizeError) as exc_info:
            transfer(cosine, golden, TransferRequest(0.0, 0.0, 10.0))
    assert exc_info.value.exit_code == 3
    transfer(cosine, golden, TransferRequest(0.0, 0.0, 10.0))


def test_request_validation():
    with pytest.raises(PreconditionError):
        TransferRequest(0.0, 0.0, 1.0, h=0.0)
    with pytest.raises(PreconditionError):
        TransferRequest(0.0, 0.0, 1.0, h=0.5)
    with pytest.raises(PreconditionError):
        TransferRequest(math.nan, 0.0, 1.0)


def test_overlong_interval_is_refused(golden, cosine):
    with pytest.raises(PreconditionError, match="split the request"):
        transfer(cosine, golden, TransferRequest(0.0, 0.0, 2e4))


def test_batch_preserves_request_order(golden, cosine):
    requests = [TransferRequest(e, 0.0, 3.0) for e in (-1.0, 0.0, 1.0, 2.0)]
    batched = transfer_batch(cosine, golden, requests, threads=3)
    sequential = [transfer(cosine, golden, r) for r in requests]
    for got, want in zip(batched, sequential):
        np.testing.assert_array_equal(got.array, want.array)
        assert got.log_scale == want.log_scale


def test_batch_rejects_zero_threads(golden, cosine):
    with pytest.raises(PreconditionError):
        transfer_batch(cosine, golden, [TransferRequest(0.0, 0.0, 1.0)], threads=0)
