"""JSON run summaries with stable key order.

Non-finite floats are written as the strings ``"inf"``, ``"-inf"`` and
``"nan"`` so the output stays strict JSON.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, Sequence

from frequency import BetaEstimate, ResonanceLadder
from gordon import GordonReport, Verdict
from lyapunov import LyapunovEstimate


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "nan"
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def gordon_summary(
    reports: Sequence[GordonReport],
    ladder: ResonanceLadder,
    beta: BetaEstimate,
    lyapunov_estimates: Sequence[LyapunovEstimate] = (),
) -> Dict[str, Any]:
    counts = {v.value: 0 for v in Verdict}
    for report in reports:
        counts[report.verdict.value] += 1
    return {
        "beta": beta.to_dict(),
        "ladder": ladder.to_dict(),
        "verdict_counts": counts,
        "lyapunov": [e.to_row() for e in lyapunov_estimates],
        "reports": [r.to_dict() for r in reports],
    }


def write_summary(payload: Dict[str, Any], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(payload), encoding="utf-8", newline="\n")
    return path


__all__ = ["gordon_summary", "to_json", "write_summary"]
