"""Test CSV, SVG and JSON outputs."""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import pytest

# Add src to path
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.exceptions import PreconditionError
from frequency import beta_estimate, from_rational, golden_mean, resonant_scales
from gordon import GordonReport, ScaleRecord, Verdict
from lyapunov import LyapunovEstimate
from reporting import (
    cfrac_frame,
    gordon_frame,
    gordon_summary,
    lyap_frame,
    lyapunov_svg,
    to_json,
    write_csv,
    write_summary,
    write_svg,
)


def estimate(energy: float, l_hat: float) -> LyapunovEstimate:
    return LyapunovEstimate(
        energy=energy, l_hat=l_hat, length=200.0, n_phases=8, stderr=0.0, per_phase=(l_hat,) * 8
    )


@pytest.fixture
def reports() -> list[GordonReport]:
    common = dict(gamma=1.0, beta_hat=1.0, epsilon=0.05, margin=0.0, stderr=0.0)
    record = ScaleRecord(
        q=4, d1=0.0, d2=0.0, three_block_norms=(1.0, 0.5, 1.0), three_block_max=0.5, defect_bound_ref=0.1, n_phi=36
    )
    return [
        GordonReport(energy=0.5, l_hat=2.0, verdict=Verdict.REGIME_NOT_MET, reason="too large", **common),
        GordonReport(energy=1.0, l_hat=0.0, verdict=Verdict.EXCLUDED_CONSISTENT, records=(record,), **common),
    ]


# =============================================================================
# CSV
# =============================================================================


def test_cfrac_csv_for_exact_rational(tmp_path):
    path = write_csv(cfrac_frame(from_rational(1, 2)), tmp_path / "cfrac.csv")
    assert path.read_bytes() == b"n,p,q,r_n,dist_bound\n1,1,2,inf,0\n"


def test_cfrac_frame_for_golden_mean():
    frame = cfrac_frame(golden_mean(8))
    assert list(frame["q"]) == [1, 2, 3, 5, 8, 13, 21, 34]
    assert frame["r_n"].iloc[0] == pytest.approx(math.log(2.0))
    assert frame["dist_bound"].iloc[0] == pytest.approx(0.5)
    assert math.isnan(frame["r_n"].iloc[-1])


def test_cfrac_frame_respects_depth():
    assert len(cfrac_frame(golden_mean(8), depth=3)) == 3


def test_lyap_csv_is_deterministic(tmp_path):
    scan = [estimate(-1.0, 1.0), estimate(0.0, 0.123456789012345)]
    first = write_csv(lyap_frame(scan), tmp_path / "a.csv").read_bytes()
    second = write_csv(lyap_frame(scan), tmp_path / "b.csv").read_bytes()
    assert first == second
    lines = first.decode().splitlines()
    assert lines[0] == "E,L_hat,stderr,length,n_phases"
    assert lines[1] == "-1,1,0,200,8"
    assert lines[2] == "0,0.123456789012,0,200,8"
    assert b"\r" not in first


def test_gordon_csv_blanks_missing_scales(tmp_path, reports):
    path = write_csv(gordon_frame(reports), tmp_path / "nested" / "gordon.csv")
    assert path.read_text().splitlines() == [
        "E,q,D1,D2,n_phi,min_max_block,verdict",
        "0.5,,,,,,regime-not-met",
        "1,4,0,0,36,0.5,excluded-consistent",
    ]


# =============================================================================
# SVG
# =============================================================================


def test_svg_is_stable_and_well_formed(tmp_path):
    scan = [estimate(-1.0, 1.0), estimate(0.0, 0.5), estimate(1.0, 0.0)]
    svg = lyapunov_svg(scan, threshold=0.25)
    assert svg == lyapunov_svg(scan, threshold=0.25)
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    assert "stroke-dasharray" in svg
    assert write_svg(svg, tmp_path / "lyap.svg").read_text() == svg


def test_svg_skips_infinite_threshold():
    svg = lyapunov_svg([estimate(0.0, 0.5), estimate(1.0, 0.0)], threshold=math.inf)
    assert "stroke-dasharray" not in svg
    assert "polyline" in svg


def test_svg_needs_points():
    with pytest.raises(PreconditionError):
        lyapunov_svg([])


# =============================================================================
# Summary
# =============================================================================


def test_summary_counts_verdicts(reports):
    freq = golden_mean(30)
    payload = gordon_summary(reports, resonant_scales(freq), beta_estimate(freq), [estimate(0.5, 2.0)])
    assert payload["verdict_counts"] == {"excluded-consistent": 1, "inconclusive": 0, "regime-not-met": 1}
    assert payload["reports"][1]["scales"][0]["q"] == 4
    assert payload["lyapunov"][0]["L_hat"] == 2.0


def test_summary_json_is_strict_and_sorted(tmp_path, reports):
    freq = from_rational(1, 3)
    payload = gordon_summary(reports, resonant_scales(freq), beta_estimate(freq))
    text = write_summary(payload, tmp_path / "summary.json").read_text()
    parsed = json.loads(text)
    assert parsed["ladder"]["beta_hat"] == "inf"
    assert list(parsed) == sorted(parsed)
    assert text.endswith("}\n")


def test_to_json_cleans_nested_non_finite_values():
    text = to_json({"b": [math.nan, -math.inf], "a": {"x": math.inf}})
    assert json.loads(text) == {"a": {"x": "inf"}, "b": ["nan", "-inf"]}
