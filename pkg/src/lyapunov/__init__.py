"""Empirical Lyapunov exponents and energy scans."""
from __future__ import annotations

from lyapunov.estimate import (
    DEFAULT_LENGTH,
    DEFAULT_PHASES,
    L_HAT_FLOOR,
    GrowthCheck,
    LyapunovEstimate,
    burn_in,
    coupling_scan,
    growth_bound_check,
    lyapunov,
    lyapunov_scan,
)

__all__ = [
    "DEFAULT_LENGTH",
    "DEFAULT_PHASES",
    "L_HAT_FLOOR",
    "GrowthCheck",
    "LyapunovEstimate",
    "burn_in",
    "coupling_scan",
    "growth_bound_check",
    "lyapunov",
    "lyapunov_scan",
]
