"""Periodicity defects, variation-of-constants oracle, three-block test and exclusion reports."""
from __future__ import annotations

from gordon.defects import (
    DefectMethod,
    DefectPair,
    JointSolution,
    joint_solution,
    periodicity_defects,
    scaled_difference_norm,
)
from gordon.oracle import MAX_ORACLE_SCALE, OracleResult, variation_of_constants_oracle
from gordon.profile import SolutionProfile, decay_profile
from gordon.report import (
    SCALE_BUDGET_DECADES,
    GordonReport,
    ScaleRecord,
    Verdict,
    check_scale_budget,
    exclusion_report,
    exclusion_scan,
    in_regime,
    regime_energies,
    regime_threshold,
)
from gordon.slopes import DecayFit, defect_decay_fit, drift_decay_fit, fit_log_slope
from gordon.three_block import BLOCK_FLOOR, BlockTriple, ThreeBlockResult, phi_net, three_block_test

__all__ = [
    "BLOCK_FLOOR",
    "MAX_ORACLE_SCALE",
    "SCALE_BUDGET_DECADES",
    "BlockTriple",
    "DecayFit",
    "DefectMethod",
    "DefectPair",
    "GordonReport",
    "JointSolution",
    "OracleResult",
    "ScaleRecord",
    "SolutionProfile",
    "ThreeBlockResult",
    "Verdict",
    "check_scale_budget",
    "decay_profile",
    "defect_decay_fit",
    "drift_decay_fit",
    "exclusion_report",
    "exclusion_scan",
    "fit_log_slope",
    "in_regime",
    "joint_solution",
    "periodicity_defects",
    "phi_net",
    "regime_energies",
    "regime_threshold",
    "scaled_difference_norm",
    "three_block_test",
    "variation_of_constants_oracle",
]
