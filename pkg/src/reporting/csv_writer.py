"""Deterministic CSV tables for the cfrac, lyap and gordon pipelines.

Comma separated, header row, ``.`` decimal, LF line endings. Floats are
written with a fixed format so identical inputs give identical bytes;
missing values are left blank.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from frequency import Frequency, convergents
from gordon import GordonReport
from lyapunov import LyapunovEstimate

FLOAT_FORMAT = "%.12g"

CFRAC_COLUMNS = ["n", "p", "q", "r_n", "dist_bound"]
LYAP_COLUMNS = ["E", "L_hat", "stderr", "length", "n_phases"]
GORDON_COLUMNS = ["E", "q", "D1", "D2", "n_phi", "min_max_block", "verdict"]


def cfrac_frame(freq: Frequency, depth: Optional[int] = None) -> pd.DataFrame:
    """
    One row per convergent: n, p_n, q_n, r_n = ln(q_{n+1}) / q_n and the
    classical bound ||q_n omega|| < 1 / q_{n+1}.

    An exact rational writes r_n = inf and dist_bound = 0 on its last row;
    the deepest row of an irrational truncation has neither.
    """
    convs = convergents(freq, freq.depth if depth is None else depth)
    qs = freq.denominators()
    rows = []
    for n, (p, q) in enumerate(convs, start=1):
        if n < freq.depth:
            ratio = math.log(qs[n]) / q
            bound = 1.0 / qs[n]
        elif freq.is_rational:
            ratio, bound = math.inf, 0.0
        else:
            ratio, bound = math.nan, math.nan
        rows.append({"n": n, "p": p, "q": q, "r_n": ratio, "dist_bound": bound})
    return pd.DataFrame(rows, columns=CFRAC_COLUMNS)


def lyap_frame(estimates: Sequence[LyapunovEstimate]) -> pd.DataFrame:
    return pd.DataFrame([e.to_row() for e in estimates], columns=LYAP_COLUMNS)


def gordon_frame(reports: Sequence[GordonReport]) -> pd.DataFrame:
    """One row per (E, q); a report without scales gives one row with blank scale columns."""
    rows = []
    for report in reports:
        if not report.records:
            rows.append({"E": report.energy, "verdict": report.verdict.value})
            continue
        for record in report.records:
            rows.append(
                {
                    "E": report.energy,
                    "q": record.q,
                    "D1": record.d1,
                    "D2": record.d2,
                    "n_phi": record.n_phi,
                    "min_max_block": record.three_block_max,
                    "verdict": report.verdict.value,
                }
            )
    frame = pd.DataFrame(rows, columns=GORDON_COLUMNS)
    return frame.astype({"q": "Int64", "n_phi": "Int64"})


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return path


__all__ = [
    "CFRAC_COLUMNS",
    "GORDON_COLUMNS",
    "LYAP_COLUMNS",
    "cfrac_frame",
    "gordon_frame",
    "lyap_frame",
    "write_csv",
]
