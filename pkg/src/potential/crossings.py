"""Exact enumeration of breakpoint crossings of the orbit omega*t + offset (mod 1)."""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from core.exceptions import ScaleBudgetError

# Refuse to enumerate more crossings than this
MAX_CROSSINGS = 2_000_000

# Crossings closer than this (relative to the interval) to an end are dropped
EDGE_TOLERANCE = 1e-12


def breakpoint_crossings(
    breakpoints: Sequence[float],
    omega: float,
    start: float,
    end: float,
    offset: float = 0.0,
    limit: int = MAX_CROSSINGS,
) -> np.ndarray:
    """
    Times t strictly between ``start`` and ``end`` where omega*t + offset hits a_i + Z.

    The constraint is linear in t, so each breakpoint contributes an
    arithmetic progression with step 1/omega. The result is sorted
    ascending whatever the order of ``start`` and ``end``.

    Raises:
        ScaleBudgetError: If more than ``limit`` crossings would be produced.
    """
    lo, hi = (start, end) if start <= end else (end, start)
    if hi <= lo or omega <= 0 or not breakpoints:
        return np.empty(0)
    u0 = omega * lo + offset
    u1 = omega * hi + offset
    expected = (math.floor(u1 - u0) + 1) * len(breakpoints)
    if expected > limit:
        raise ScaleBudgetError(
            f"{expected} breakpoint crossings on [{lo:g}, {hi:g}] exceed the limit {limit}"
        )

    pieces = []
    for a in breakpoints:
        k_lo = math.ceil(u0 - a)
        k_hi = math.floor(u1 - a)
        if k_hi < k_lo:
            continue
        ks = np.arange(k_lo, k_hi + 1, dtype=float)
        pieces.append((a + ks - offset) / omega)
    if not pieces:
        return np.empty(0)

    times = np.sort(np.concatenate(pieces))
    guard = EDGE_TOLERANCE * max(1.0, hi - lo)
    times = times[(times > lo + guard) & (times < hi - guard)]
    return times


def merge_cut_points(*groups: Iterable[float], start: float, end: float) -> np.ndarray:
    """Sorted panel edges from ``start`` to ``end`` (either order) with duplicate cuts removed."""
    lo, hi = (start, end) if start <= end else (end, start)
    cuts = [np.asarray(list(g) if not isinstance(g, np.ndarray) else g, dtype=float) for g in groups]
    inner = np.concatenate(cuts) if cuts else np.empty(0)
    edges = np.unique(np.concatenate(([lo], inner, [hi])))
    # Collapse cuts that coincide up to rounding
    keep = np.concatenate(([True], np.diff(edges) > EDGE_TOLERANCE * max(1.0, hi - lo)))
    edges = edges[keep]
    edges[-1] = hi
    return edges if start <= end else edges[::-1]


__all__ = ["MAX_CROSSINGS", "breakpoint_crossings", "merge_cut_points"]
