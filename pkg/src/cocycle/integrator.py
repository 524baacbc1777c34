"""Fixed-step fourth-order one-step integration of linear matrix ODEs Y' = A(x) Y.

Everything here is vectorised over steps: stage points for a whole group of
unit blocks are evaluated at once, the per-step propagators are formed in
batch and each block's ordered product is tree-reduced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

MAX_STEP = 1e-2
# Unit blocks processed per vectorised batch
BLOCK_CHUNK = 32
# Stage points at panel ends are moved this far inside to take one-sided limits
EDGE_NUDGE = 1e-9

CutFn = Callable[[float, float], np.ndarray]
CoefficientFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class StepGrid:
    """Stage points and signed step lengths; ``counts`` holds the steps per panel."""

    left: np.ndarray
    mid: np.ndarray
    right: np.ndarray
    step: np.ndarray
    counts: np.ndarray

    @property
    def size(self) -> int:
        return int(self.step.size)


def panel_steps(edges: np.ndarray, h: float, even: bool = False) -> StepGrid:
    """
    Equal steps of length <= h inside each panel [edges[i], edges[i+1]].
    With ``even`` every panel gets an even step count (Simpson pairs).

    ``edges`` is ordered in the direction of travel, so a descending
    sequence integrates backwards with negative steps.
    """
    edges = np.asarray(edges, dtype=float)
    lengths = np.diff(edges)
    counts = np.maximum(1, np.ceil(np.abs(lengths) / h - 1e-9)).astype(int)
    if even:
        counts += counts % 2
    owner = np.repeat(np.arange(lengths.size), counts)
    first = np.concatenate(([0], np.cumsum(counts)[:-1]))
    local = np.arange(owner.size) - first[owner]
    step = lengths[owner] / counts[owner]

    left = edges[owner] + local * step
    mid = left + 0.5 * step
    right = left + step
    last = first + counts - 1
    right[last] = edges[1:]

    nudge = np.sign(step) * np.minimum(EDGE_NUDGE, np.abs(step) / 4.0)
    left = left.copy()
    left[first] += nudge[first]
    right[last] -= nudge[last]
    return StepGrid(left=left, mid=mid, right=right, step=step, counts=counts)


def rk4_propagators(a1: np.ndarray, a2: np.ndarray, a4: np.ndarray, step: np.ndarray) -> np.ndarray:
    """
    One-step propagators of the classical fourth-order scheme for Y' = A Y.

    a1, a2, a4 are A at the left, middle and right stage points, shape
    (n, d, d); returns (n, d, d).
    """
    d = a1.shape[-1]
    eye = np.eye(d)
    h = np.asarray(step, dtype=float)[:, None, None]
    m1 = eye + 0.5 * h * a1
    k2 = a2 @ m1
    m2 = eye + 0.5 * h * k2
    k3 = a2 @ m2
    m3 = eye + h * k3
    k4 = a4 @ m3
    return eye + (h / 6.0) * (a1 + 2.0 * k2 + 2.0 * k3 + k4)


def ordered_product(mats: np.ndarray) -> np.ndarray:
    """mats[n-1] @ ... @ mats[0] by pairwise tree reduction."""
    return segment_products(mats, np.array([mats.shape[0]]))[0]


def segment_products(mats: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Ordered product of each consecutive run of ``counts[k]`` matrices."""
    d = mats.shape[-1]
    n_seg = counts.size
    width = int(counts.max()) if n_seg else 0
    padded = np.broadcast_to(np.eye(d), (n_seg, max(width, 1), d, d)).copy()
    first = np.concatenate(([0], np.cumsum(counts)[:-1]))
    seg = np.repeat(np.arange(n_seg), counts)
    pos = np.arange(mats.shape[0]) - first[seg]
    padded[seg, pos] = mats

    while padded.shape[1] > 1:
        if padded.shape[1] % 2:
            pad = np.broadcast_to(np.eye(d), (n_seg, 1, d, d))
            padded = np.concatenate((padded, pad), axis=1)
        padded = padded[:, 1::2] @ padded[:, 0::2]
    return padded[:, 0]


def unit_blocks(start: float, end: float) -> list[tuple[float, float]]:
    """Split the path start -> end into consecutive pieces of length at most one."""
    length = abs(end - start)
    if length == 0.0:
        return []
    sign = 1.0 if end > start else -1.0
    n = max(1, math.ceil(length - 1e-12))
    marks = [start + sign * k for k in range(n)] + [end]
    return list(zip(marks[:-1], marks[1:]))


def block_propagators(
    start: float,
    end: float,
    h: float,
    cuts_for: CutFn,
    coefficients: CoefficientFn,
    log_det: bool = True,
) -> Iterator[tuple[np.ndarray, float]]:
    """
    Yield (propagator, summed per-step log det of the leading 2x2 block) per unit block.

    ``cuts_for(a, b)`` returns interior cut points of the block, in any
    order; ``coefficients(x)`` returns A at the points x with shape
    (n, d, d). Blocks come out in the direction of travel.
    """
    blocks = unit_blocks(start, end)
    for offset in range(0, len(blocks), BLOCK_CHUNK):
        chunk = blocks[offset: offset + BLOCK_CHUNK]
        grids = []
        for a, b in chunk:
            cuts = np.asarray(cuts_for(a, b), dtype=float)
            inner = np.sort(cuts) if b > a else np.sort(cuts)[::-1]
            grids.append(panel_steps(np.concatenate(([a], inner, [b])), h))
        counts = np.array([g.size for g in grids])
        left = np.concatenate([g.left for g in grids])
        mid = np.concatenate([g.mid for g in grids])
        right = np.concatenate([g.right for g in grids])
        step = np.concatenate([g.step for g in grids])

        phis = rk4_propagators(coefficients(left), coefficients(mid), coefficients(right), step)
        products = segment_products(phis, counts)

        if log_det:
            # leading 2x2 block; the 4x4 joint propagators are block lower-triangular
            dets = phis[:, 0, 0] * phis[:, 1, 1] - phis[:, 0, 1] * phis[:, 1, 0]
            per_step = np.log(dets)
            ends = np.cumsum(counts)
            sums = np.add.reduceat(per_step, ends - counts) if per_step.size else np.zeros(counts.size)
        else:
            sums = np.zeros(counts.size)
        for k in range(len(chunk)):
            yield products[k], float(sums[k])


def schroedinger_coefficients(w: np.ndarray) -> np.ndarray:
    """A = [[0, w], [1, 0]] for w = V - E, shape (n, 2, 2)."""
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape + (2, 2))
    out[..., 0, 1] = w
    out[..., 1, 0] = 1.0
    return out


__all__ = [
    "BLOCK_CHUNK",
    "MAX_STEP",
    "StepGrid",
    "block_propagators",
    "ordered_product",
    "panel_steps",
    "rk4_propagators",
    "schroedinger_coefficients",
    "segment_products",
    "unit_blocks",
]
