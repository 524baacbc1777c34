"""Minimal, bit-stable SVG line plot of the Lyapunov scan.

Coordinates are formatted with a fixed precision and no timestamps or
random ids are emitted, so the same scan always gives the same bytes.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence

from core.exceptions import PreconditionError
from lyapunov import LyapunovEstimate

WIDTH = 640
HEIGHT = 400
PAD = 50
TICKS = 5


def _fmt(v: float) -> str:
    return "%.6f" % v


def _span(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def lyapunov_svg(
    estimates: Sequence[LyapunovEstimate],
    title: str = "Lyapunov exponent",
    threshold: Optional[float] = None,
) -> str:
    """
    Render L_hat against E as a polyline with axes, ticks and a title.

    ``threshold`` draws a dashed horizontal line, typically gamma * beta_hat
    minus the margin; an infinite threshold is skipped.
    """
    if not estimates:
        raise PreconditionError("nothing to plot")
    xs = [e.energy for e in estimates]
    ys = [e.l_hat for e in estimates]
    draw_threshold = threshold is not None and math.isfinite(threshold)
    x_lo, x_hi = _span(xs)
    y_lo, y_hi = _span(ys + ([threshold] if draw_threshold else []))

    def sx(v: float) -> float:
        return PAD + (v - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * PAD)

    def sy(v: float) -> float:
        return HEIGHT - PAD - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="{PAD // 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
    ]
    for k in range(TICKS + 1):
        xv = x_lo + (x_hi - x_lo) * k / TICKS
        yv = y_lo + (y_hi - y_lo) * k / TICKS
        out.append(
            f'<text x="{_fmt(sx(xv))}" y="{HEIGHT - PAD + 16}" text-anchor="middle" '
            f'font-size="10">{xv:.3g}</text>'
        )
        out.append(
            f'<text x="{PAD - 6}" y="{_fmt(sy(yv))}" text-anchor="end" font-size="10">{yv:.3g}</text>'
        )
    out.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">E</text>')
    out.append(
        f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT // 2})">L_hat</text>'
    )
    if draw_threshold:
        y = _fmt(sy(threshold))
        out.append(
            f'<line x1="{PAD}" y1="{y}" x2="{WIDTH - PAD}" y2="{y}" stroke="gray" stroke-dasharray="4 4"/>'
        )
    points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
    out.append(f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{points}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(svg: str, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8", newline="\n")
    return path


__all__ = ["lyapunov_svg", "write_svg"]
