"""CSV tables, SVG plots and JSON summaries."""
from __future__ import annotations

from reporting.csv_writer import (
    CFRAC_COLUMNS,
    GORDON_COLUMNS,
    LYAP_COLUMNS,
    cfrac_frame,
    gordon_frame,
    lyap_frame,
    write_csv,
)
from reporting.summary import gordon_summary, to_json, write_summary
from reporting.svg_plot import lyapunov_svg, write_svg

__all__ = [
    "CFRAC_COLUMNS",
    "GORDON_COLUMNS",
    "LYAP_COLUMNS",
    "cfrac_frame",
    "gordon_frame",
    "gordon_summary",
    "lyap_frame",
    "lyapunov_svg",
    "to_json",
    "write_csv",
    "write_summary",
    "write_svg",
]
