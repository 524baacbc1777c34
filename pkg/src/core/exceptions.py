"""Custom exceptions for the gordonlab numerical laboratory.

Every exception carries an ``exit_code`` used by the CLI to honour the
exit-code contract (0 ok, 2 configuration, 3 invariant violation, 4 scale
budget refusal).
"""
from __future__ import annotations

from typing import Optional


class GordonLabError(Exception):
    """Base exception for all gordonlab errors."""

    exit_code: int = 1


# =============================================================================
# Configuration Errors (exit 2)
# =============================================================================


class ConfigurationError(GordonLabError):
    """Raised when a run configuration or model declaration is invalid."""

    exit_code = 2


class PreconditionError(ConfigurationError):
    """Raised when an operation is called outside its documented domain."""

    pass


class OutOfDepthError(PreconditionError):
    """Raised when more convergents are requested than quotients are stored."""

    def __init__(self, requested: int, available: int) -> None:
        self.requested = requested
        self.available = available
        super().__init__(
            f"requested depth {requested} exceeds the {available} stored partial quotients"
        )


class PrecisionError(ConfigurationError):
    """Raised when ||k omega|| cannot be certified at the stored depth."""

    def __init__(self, message: str, required_depth: Optional[int] = None) -> None:
        self.required_depth = required_depth
        super().__init__(message)


# =============================================================================
# Invariant Violations (exit 3)
# =============================================================================


class InvariantViolationError(GordonLabError):
    """Raised when a mathematical invariant fails on computed data."""

    exit_code = 3


class IntegrityError(InvariantViolationError):
    """Raised when an SL(2,R) value has drifted away from unit determinant."""

    pass


class StepSizeError(InvariantViolationError):
    """Raised when determinant drift after integration shows the step is too coarse."""

    def __init__(self, drift: float, h: float) -> None:
        self.drift = drift
        self.h = h
        super().__init__(
            f"determinant drift {drift:.3e} exceeds tolerance at h={h:g}; retry with a smaller step"
        )


class LemmaViolationError(InvariantViolationError):
    """Raised when max{|B^2 phi|, |B phi|, |B^-1 phi|} >= 1/4 fails."""

    pass


class TheoryViolationError(InvariantViolationError):
    """Raised when the three-block lower bound fails although both defects are small."""

    pass


# =============================================================================
# Scale Budget (exit 4)
# =============================================================================


class ScaleBudgetError(GordonLabError):
    """Raised when a requested scale exceeds what desk precision can represent."""

    exit_code = 4

    def __init__(
        self,
        message: str,
        achieved_depth: Optional[int] = None,
        scale: Optional[int] = None,
    ) -> None:
        self.achieved_depth = achieved_depth
        self.scale = scale
        super().__init__(message)


__all__ = [
    # Base
    "GordonLabError",
    # Configuration
    "ConfigurationError",
    "PreconditionError",
    "OutOfDepthError",
    "PrecisionError",
    # Invariants
    "InvariantViolationError",
    "IntegrityError",
    "StepSizeError",
    "LemmaViolationError",
    "TheoryViolationError",
    # Scale
    "ScaleBudgetError",
]
