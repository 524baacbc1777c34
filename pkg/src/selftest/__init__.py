"""Self-test suites for the numerical core."""
from __future__ import annotations

from selftest.suites import (
    DET_FAULT_FACTOR,
    SUITE_NAMES,
    SuiteResult,
    closed_form,
    constant_propagator,
    run_suites,
)

__all__ = [
    "DET_FAULT_FACTOR",
    "SUITE_NAMES",
    "SuiteResult",
    "closed_form",
    "constant_propagator",
    "run_suites",
]
