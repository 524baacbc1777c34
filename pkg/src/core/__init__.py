"""Core module exports."""
from __future__ import annotations

from core.config import Settings, get_settings, reload_settings
from core.exceptions import (
    # Base
    GordonLabError,
    # Configuration
    ConfigurationError,
    PreconditionError,
    OutOfDepthError,
    PrecisionError,
    # Invariants
    InvariantViolationError,
    IntegrityError,
    StepSizeError,
    LemmaViolationError,
    TheoryViolationError,
    # Scale
    ScaleBudgetError,
)
from core.logging_config import (
    setup_logging,
    get_logger,
    get_context_logger,
    log_timed_stage,
    JSONFormatter,
    ContextLogger,
)

__all__ = [
    # Config
    "Settings",
    "get_settings",
    "reload_settings",
    # Exceptions
    "GordonLabError",
    "ConfigurationError",
    "PreconditionError",
    "OutOfDepthError",
    "PrecisionError",
    "InvariantViolationError",
    "IntegrityError",
    "StepSizeError",
    "LemmaViolationError",
    "TheoryViolationError",
    "ScaleBudgetError",
    # Logging
    "setup_logging",
    "get_logger",
    "get_context_logger",
    "log_timed_stage",
    "JSONFormatter",
    "ContextLogger",
]
