"""Sampled Hölder seminorm per breakpoint interval."""
from __future__ import annotations

import math

import numpy as np

from core.exceptions import InvariantViolationError, PreconditionError
from core.logging_config import get_logger
from potential.models import PotentialSpec

LOGGER = get_logger(__name__)

DEFAULT_X_SAMPLES = 16
# Extra dyadic levels below the sample spacing
EXTRA_DYADIC_LEVELS = 2
RELATIVE_SLACK = 1e-9


def holder_seminorm_estimate(
    spec: PotentialSpec,
    samples: int,
    x_samples: int = DEFAULT_X_SAMPLES,
    check: bool = True,
) -> tuple[float, ...]:
    """
    Max of |V(x,y1) - V(x,y2)| / |y1 - y2|^gamma on each breakpoint interval.

    Pairs are y1 on a uniform grid of ``samples`` points and y2 = y1 + w 2^-j
    (w the interval width), both inside the half-open interval, crossed
    with a uniform grid of ``x_samples`` points in x.

    Raises:
        PreconditionError: If samples < 2.
        InvariantViolationError: If an estimate exceeds ``holder_bound``
            (only when ``check`` is set); the message names the witness pair.
    """
    if samples < 2:
        raise PreconditionError(f"samples must be >= 2, got {samples}")
    xs = np.arange(x_samples) / x_samples
    levels = int(math.ceil(math.log2(samples))) + EXTRA_DYADIC_LEVELS

    estimates: list[float] = []
    for lo, hi in zip(spec.breakpoints, spec.breakpoints[1:]):
        width = hi - lo
        y1 = lo + width * np.arange(samples) / samples
        v1 = spec(xs[:, None], y1[None, :])
        best = 0.0
        witness = (0.0, lo, lo)
        for j in range(1, levels + 1):
            step = width * 2.0**-j
            y2 = y1 + step
            inside = y2 < hi
            if not inside.any():
                continue
            v2 = spec(xs[:, None], y2[None, inside])
            quotient = np.abs(v1[:, inside] - v2) / step**spec.gamma
            k = int(quotient.argmax())
            value = float(quotient.flat[k])
            if value > best:
                ix, iy = np.unravel_index(k, quotient.shape)
                best = value
                witness = (float(xs[ix]), float(y1[inside][iy]), float(y2[inside][iy]))
        estimates.append(best)

        if check and best > spec.holder_bound * (1 + RELATIVE_SLACK) + RELATIVE_SLACK:
            x, a, b = witness
            raise InvariantViolationError(
                f"{spec.label}: Hölder quotient {best:.6g} exceeds declared bound "
                f"{spec.holder_bound:.6g} at x={x:.6g}, y1={a:.9g}, y2={b:.9g}"
            )

    LOGGER.debug(f"Hölder estimates for {spec.label}: {estimates}")
    return tuple(estimates)


__all__ = ["holder_seminorm_estimate"]
