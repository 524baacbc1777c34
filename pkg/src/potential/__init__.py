"""Potentials in A_gamma, breakpoint crossings, Hölder estimates and drift integrals."""
from __future__ import annotations

from potential.crossings import MAX_CROSSINGS, breakpoint_crossings, merge_cut_points
from potential.drift import (
    DEFAULT_QUAD_POINTS_PER_UNIT,
    DriftReport,
    complement_measure,
    drift_integral,
    good_set_measure,
    good_set_monte_carlo,
)
from potential.holder import holder_seminorm_estimate
from potential.models import BUILTIN_MODELS, PotentialSpec, builtin_model, load_sample_table

__all__ = [
    "BUILTIN_MODELS",
    "DEFAULT_QUAD_POINTS_PER_UNIT",
    "MAX_CROSSINGS",
    "DriftReport",
    "PotentialSpec",
    "breakpoint_crossings",
    "builtin_model",
    "complement_measure",
    "drift_integral",
    "good_set_measure",
    "good_set_monte_carlo",
    "holder_seminorm_estimate",
    "load_sample_table",
    "merge_cut_points",
]
