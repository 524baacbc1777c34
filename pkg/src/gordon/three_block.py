"""Three-block lower bound at a resonant scale, checked by direct propagation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

from cocycle import StateVec, TransferRequest, propagate, simon_bound_check, transfer
from core.exceptions import PreconditionError, TheoryViolationError
from core.logging_config import get_logger
from frequency import Frequency
from gordon.defects import DefectPair, periodicity_defects
from potential import PotentialSpec

LOGGER = get_logger(__name__)

BLOCK_FLOOR = 0.125
BLOCK_SLACK = 1e-6
DEFAULT_NET_SIZE = 32
UNIT_TOLERANCE = 1e-10


def phi_net(n: int = DEFAULT_NET_SIZE) -> list[StateVec]:
    """n directions at angles 2 pi (k + 1/2) / n followed by the four coordinate directions."""
    if n < 1:
        raise PreconditionError(f"net size must be >= 1, got {n}")
    net = [StateVec.from_angle(2.0 * math.pi * (k + 0.5) / n) for k in range(n)]
    net += [StateVec(1.0, 0.0), StateVec(0.0, 1.0), StateVec(-1.0, 0.0), StateVec(0.0, -1.0)]
    return net


@dataclass(frozen=True)
class BlockTriple:
    """Propagated norms at -q, q, 2q for one phi, next to the B-power norms."""

    phi: tuple[float, float]
    at_minus_q: float
    at_q: float
    at_two_q: float
    b_powers: tuple[float, float, float]

    @property
    def actual(self) -> tuple[float, float, float]:
        return (self.at_minus_q, self.at_q, self.at_two_q)

    @property
    def maximum(self) -> float:
        return max(self.actual)


@dataclass(frozen=True)
class ThreeBlockResult:
    """Per-phi triples at one scale and the minimum over phi of the actual max."""

    q: int
    energy: float
    defects: DefectPair
    triples: tuple[BlockTriple, ...]

    @property
    def weakest(self) -> BlockTriple:
        return min(self.triples, key=lambda t: t.maximum)

    @property
    def min_max(self) -> float:
        return self.weakest.maximum

    @property
    def n_phi(self) -> int:
        return len(self.triples)

    @property
    def holds(self) -> bool:
        return self.min_max >= BLOCK_FLOOR - BLOCK_SLACK

    def to_dict(self) -> Dict[str, Any]:
        weakest = self.weakest
        return {
            "q": self.q,
            "energy": self.energy,
            "defects": self.defects.to_dict(),
            "n_phi": self.n_phi,
            "min_max_block": self.min_max,
            "weakest_phi": list(weakest.phi),
            "weakest_norms": list(weakest.actual),
        }


def three_block_test(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    q: int,
    phis: Optional[Sequence[StateVec]] = None,
    h: float = 1e-3,
    defects: Optional[DefectPair] = None,
) -> ThreeBlockResult:
    """
    ||T(E,0,x) phi|| at x = -q, q, 2q by actual propagation, for every phi.

    T(E,0,2q) is integrated directly over [0, 2q]. The B-power triple
    (B = T(E,0,q)) goes through the three-norm check as well.

    Raises:
        PreconditionError: If a phi is not unit length.
        LemmaViolationError: If the B-power triple misses 1/4.
        TheoryViolationError: If D1, D2 <= 1/8 and some phi stays below 1/8 at all three points.
    """
    net = list(phis) if phis is not None else phi_net()
    for phi in net:
        if not abs(phi.norm - 1.0) <= UNIT_TOLERANCE:
            raise PreconditionError(f"phi must be a unit vector, got |phi| = {phi.norm!r}")
    if defects is None:
        defects = periodicity_defects(spec, freq, energy, q, h)

    base = TransferRequest(energy, 0.0, float(q), h)
    forward = transfer(spec, freq, base)
    backward = transfer(spec, freq, base.interval(0.0, -float(q)))
    double = transfer(spec, freq, base.interval(0.0, 2.0 * q))

    triples = []
    for phi in net:
        powers = simon_bound_check(forward, phi)
        triples.append(
            BlockTriple(
                phi=(phi.du, phi.u),
                at_minus_q=propagate(phi, backward).norm,
                at_q=propagate(phi, forward).norm,
                at_two_q=propagate(phi, double).norm,
                b_powers=(powers.norm_b2, powers.norm_b, powers.norm_binv),
            )
        )
    result = ThreeBlockResult(q=q, energy=float(energy), defects=defects, triples=tuple(triples))

    if defects.small and not result.holds:
        weakest = result.weakest
        raise TheoryViolationError(
            f"three-block bound failed at q={q}, E={energy:g}: D1={defects.d1:.3e}, "
            f"D2={defects.d2:.3e} but max norm {weakest.maximum:.6g} < 1/8 "
            f"for phi=({weakest.phi[0]:.6g}, {weakest.phi[1]:.6g})"
        )
    return result


__all__ = [
    "BLOCK_FLOOR",
    "BlockTriple",
    "ThreeBlockResult",
    "phi_net",
    "three_block_test",
]
