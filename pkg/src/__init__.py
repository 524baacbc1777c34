"""Top-level package for the gordonlab numerical laboratory."""
from __future__ import annotations

__version__ = "0.1.0"

__all__ = [
    "cocycle",
    "core",
    "frequency",
    "gordon",
    "lyapunov",
    "potential",
    "reporting",
    "selftest",
]
