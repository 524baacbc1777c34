"""Per-energy exclusion reports."""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence

from core.exceptions import PreconditionError, PrecisionError, ScaleBudgetError, StepSizeError
from core.logging_config import get_context_logger, log_timed_stage
from frequency import Frequency, ResonanceLadder
from gordon.defects import DefectMethod, periodicity_defects
from gordon.three_block import BLOCK_FLOOR, BLOCK_SLACK, DEFAULT_NET_SIZE, phi_net, three_block_test
from lyapunov import LyapunovEstimate
from potential import PotentialSpec

# Largest decimal exponent of e^{(beta_hat + L_hat) q} the bookkeeping accepts
SCALE_BUDGET_DECADES = 300.0
STDERR_FACTOR = 3.0
DEFECT_CEILING = 0.125


class Verdict(str, Enum):
    """
    Outcome of one exclusion report, ordered by ``rank``.

    A larger margin can only lower the rank. Energies that leave the regime
    drop to regime-not-met, which ranks below inconclusive.
    """

    EXCLUDED_CONSISTENT = "excluded-consistent"
    INCONCLUSIVE = "inconclusive"
    REGIME_NOT_MET = "regime-not-met"

    @property
    def rank(self) -> int:
        return {"excluded-consistent": 2, "inconclusive": 1, "regime-not-met": 0}[self.value]


@dataclass(frozen=True)
class ScaleRecord:
    """Defects and the weakest three-block triple at one ladder scale."""

    q: int
    d1: float
    d2: float
    three_block_norms: tuple[float, float, float]
    three_block_max: float
    defect_bound_ref: float
    n_phi: int

    @property
    def passes(self) -> bool:
        return (
            self.d1 <= DEFECT_CEILING
            and self.d2 <= DEFECT_CEILING
            and self.three_block_max >= BLOCK_FLOOR - BLOCK_SLACK
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "D1": self.d1,
            "D2": self.d2,
            "three_block_norms": list(self.three_block_norms),
            "three_block_max": self.three_block_max,
            "defect_bound_ref": self.defect_bound_ref,
            "n_phi": self.n_phi,
        }


@dataclass(frozen=True)
class GordonReport:
    """Exclusion verdict at one energy; "consistent" is an empirical statement, never a proof."""

    energy: float
    gamma: float
    beta_hat: float
    epsilon: float
    margin: float
    l_hat: float
    stderr: float
    verdict: Verdict
    reason: str = ""
    records: tuple[ScaleRecord, ...] = field(default_factory=tuple)

    @property
    def regime_threshold(self) -> float:
        return regime_threshold(self.gamma, self.beta_hat, self.margin)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "energy": self.energy,
            "gamma": self.gamma,
            "beta_hat": self.beta_hat,
            "epsilon": self.epsilon,
            "margin": self.margin,
            "l_hat": self.l_hat,
            "stderr": self.stderr,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "scales": [r.to_dict() for r in self.records],
        }


def regime_threshold(gamma: float, beta_hat: float, margin: float) -> float:
    """gamma * beta_hat - margin; infinite for periodic frequencies."""
    return math.inf if math.isinf(beta_hat) else gamma * beta_hat - margin


def in_regime(estimate: LyapunovEstimate, gamma: float, beta_hat: float, margin: float) -> bool:
    return estimate.l_hat + STDERR_FACTOR * estimate.stderr < regime_threshold(gamma, beta_hat, margin)


def regime_energies(
    estimates: Sequence[LyapunovEstimate],
    gamma: float,
    beta_hat: float,
    margin: float = 0.0,
) -> list[float]:
    """Energies of a scan with L_hat + 3 stderr < gamma beta_hat - margin."""
    return [e.energy for e in estimates if in_regime(e, gamma, beta_hat, margin)]


def check_scale_budget(ladder: ResonanceLadder, l_hat: float) -> None:
    """
    Refuse scales where e^{(beta_hat + L_hat) q} passes 10^300.

    beta_hat is left out for periodic ladders.

    Raises:
        ScaleBudgetError: Naming the first offending scale.
    """
    rate = l_hat + (0.0 if ladder.periodic else ladder.beta_hat)
    for q in ladder.scales:
        decades = rate * q / math.log(10.0)
        if decades > SCALE_BUDGET_DECADES:
            raise ScaleBudgetError(
                f"scale q={q} needs e^{{{rate * q:.1f}}} ~ 10^{decades:.0f}; "
                f"lower max_q below the 10^{SCALE_BUDGET_DECADES:.0f} budget",
                scale=q,
            )


def _defect_bound_ref(l_hat: float, gamma: float, ladder: ResonanceLadder, q: int) -> float:
    if ladder.periodic:
        return 0.0
    exponent = (l_hat - gamma * ladder.beta_hat + ladder.epsilon) * q
    return math.exp(min(exponent, 700.0))


def exclusion_report(
    spec: PotentialSpec,
    freq: Frequency,
    energy: float,
    ladder: ResonanceLadder,
    lyap: LyapunovEstimate,
    margin: float = 0.0,
    h: float = 1e-3,
    n_phi: int = DEFAULT_NET_SIZE,
    method: DefectMethod | str = DefectMethod.PERTURBATIVE,
) -> GordonReport:
    """
    Assemble the regime check, defects and three-block results into a verdict.

    Order: regime first, then the scale budget and the ladder, then per-scale
    conditions. Step-size and precision failures downgrade to inconclusive
    with a reason.

    Raises:
        ScaleBudgetError: If an in-regime energy needs a scale beyond the budget.
        TheoryViolationError: If the three-block bound fails with small defects.
    """
    logger = get_context_logger(__name__, energy=energy, model=spec.label)
    started = time.perf_counter()

    def report(verdict: Verdict, reason: str = "", records: tuple[ScaleRecord, ...] = ()) -> GordonReport:
        log_timed_stage(
            logger, "exclusion_report", (time.perf_counter() - started) * 1000, verdict=verdict.value
        )
        return GordonReport(
            energy=float(energy),
            gamma=spec.gamma,
            beta_hat=ladder.beta_hat,
            epsilon=ladder.epsilon,
            margin=margin,
            l_hat=lyap.l_hat,
            stderr=lyap.stderr,
            verdict=verdict,
            reason=reason,
            records=records,
        )

    threshold = regime_threshold(spec.gamma, ladder.beta_hat, margin)
    if not in_regime(lyap, spec.gamma, ladder.beta_hat, margin):
        return report(
            Verdict.REGIME_NOT_MET,
            f"L_hat + 3 stderr = {lyap.l_hat + STDERR_FACTOR * lyap.stderr:.6g} >= {threshold:.6g}",
        )
    check_scale_budget(ladder, lyap.l_hat)
    if ladder.is_empty():
        return report(Verdict.INCONCLUSIVE, f"empty ladder: {ladder.diagnostic}")

    net = phi_net(n_phi)
    records: list[ScaleRecord] = []
    for q in ladder.scales:
        try:
            defects = periodicity_defects(spec, freq, energy, q, h, method)
            blocks = three_block_test(spec, freq, energy, q, net, h, defects=defects)
        except (StepSizeError, PrecisionError, ScaleBudgetError) as exc:
            logger.warning(f"Scale q={q} downgraded: {exc}")
            return report(Verdict.INCONCLUSIVE, f"q={q}: {exc}", tuple(records))
        weakest = blocks.weakest
        records.append(
            ScaleRecord(
                q=q,
                d1=defects.d1,
                d2=defects.d2,
                three_block_norms=weakest.actual,
                three_block_max=weakest.maximum,
                defect_bound_ref=_defect_bound_ref(lyap.l_hat, spec.gamma, ladder, q),
                n_phi=blocks.n_phi,
            )
        )

    failing = [r for r in records if not r.passes]
    if failing:
        first = failing[0]
        return report(
            Verdict.INCONCLUSIVE,
            f"q={first.q}: D1={first.d1:.3e}, D2={first.d2:.3e}, min max block {first.three_block_max:.4g}",
            tuple(records),
        )
    return report(Verdict.EXCLUDED_CONSISTENT, "", tuple(records))


def exclusion_scan(
    spec: PotentialSpec,
    freq: Frequency,
    estimates: Sequence[LyapunovEstimate],
    ladder: ResonanceLadder,
    margin: float = 0.0,
    h: float = 1e-3,
    n_phi: int = DEFAULT_NET_SIZE,
    method: DefectMethod | str = DefectMethod.PERTURBATIVE,
    threads: Optional[int] = None,
) -> list[GordonReport]:
    """
    One report per Lyapunov estimate, in the estimates' order.

    The scale budget is checked for every in-regime energy before any defect
    work; energies outside the regime never touch the ladder.
    """
    if threads is not None and threads < 1:
        raise PreconditionError(f"threads must be >= 1, got {threads}")
    for est in estimates:
        if in_regime(est, spec.gamma, ladder.beta_hat, margin):
            check_scale_budget(ladder, est.l_hat)

    def one(est: LyapunovEstimate) -> GordonReport:
        return exclusion_report(spec, freq, est.energy, ladder, est, margin, h, n_phi, method)

    if threads == 1 or len(estimates) <= 1:
        return [one(est) for est in estimates]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, estimates))


__all__ = [
    "SCALE_BUDGET_DECADES",
    "GordonReport",
    "ScaleRecord",
    "Verdict",
    "check_scale_budget",
    "exclusion_report",
    "exclusion_scan",
    "in_regime",
    "regime_energies",
    "regime_threshold",
]
