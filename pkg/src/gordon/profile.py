"""Norm profiles of shooting solutions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from cocycle import MAX_INTERVAL_LENGTH, StateVec, TransferRequest, propagate, transfer
from core.exceptions import PreconditionError
from frequency import Frequency
from potential import PotentialSpec


@dataclass(frozen=True)
class SolutionProfile:
    """log ||(u'(x), u(x))|| at the sample points for initial data phi at 0."""

    xs: tuple[float, ...]
    log_norms: tuple[float, ...]
    phi: StateVec

    @property
    def norms(self) -> np.ndarray:
        return np.exp(np.asarray(self.log_norms))

    def to_dict(self) -> Dict[str, Any]:
        return {"x": list(self.xs), "log_norm": list(self.log_norms), "phi": [self.phi.du, self.phi.u]}


def decay_profile(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    phi: StateVec,
    x_max: float,
    n_samples: int,
    h: float = 1e-3,
) -> SolutionProfile:
    """
    Sample the shooting solution at n_samples evenly spaced points of [0, x_max].

    Propagation runs piece by piece between samples, so each sample costs
    only its own segment.

    Raises:
        PreconditionError: If n_samples < 2 or |x_max| is zero or beyond MAX_INTERVAL_LENGTH.
    """
    if n_samples < 2:
        raise PreconditionError(f"n_samples must be >= 2, got {n_samples}")
    if x_max == 0 or abs(x_max) > MAX_INTERVAL_LENGTH:
        raise PreconditionError(f"x_max must be non-zero with |x_max| <= {MAX_INTERVAL_LENGTH:g}")

    xs = np.linspace(0.0, float(x_max), n_samples)
    state = phi
    log_norms = [phi.log_norm]
    for a, b in zip(xs[:-1], xs[1:]):
        state = propagate(state, transfer(spec, freq, TransferRequest(energy, float(a), float(b), h)))
        log_norms.append(state.log_norm)
    return SolutionProfile(xs=tuple(float(x) for x in xs), log_norms=tuple(log_norms), phi=phi)


__all__ = ["SolutionProfile", "decay_profile"]
