"""Pytest configuration and fixtures."""
from __future__ import annotations

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

# Keep test logs quiet
os.environ.setdefault("LOG_LEVEL", "WARNING")

from frequency import Frequency, from_rational, golden_mean, liouville_builder
from potential import PotentialSpec, builtin_model


@pytest.fixture(scope="session")
def golden() -> Frequency:
    """Golden mean, 30 partial quotients."""
    return golden_mean(30)


@pytest.fixture(scope="session")
def liouville() -> Frequency:
    """Liouville frequency with beta = 1: denominators 1, 4, 221, ~e^221."""
    return liouville_builder(1.0, 4)


@pytest.fixture(scope="session")
def rational_third() -> Frequency:
    """Exact rational 1/3."""
    return from_rational(1, 3)


@pytest.fixture(scope="session")
def free() -> PotentialSpec:
    """V = 0."""
    return builtin_model("constant", [0.0])


@pytest.fixture(scope="session")
def cosine() -> PotentialSpec:
    return builtin_model("cosine", [1.0])


@pytest.fixture(scope="session")
def sawtooth() -> PotentialSpec:
    return builtin_model("sawtooth", [1.0])


@pytest.fixture(scope="session")
def sample_table() -> np.ndarray:
    return 0.5 * np.cos(2.0 * np.pi * np.arange(32) / 32.0)


@pytest.fixture
def table_csv(tmp_path: Path, sample_table: np.ndarray) -> Path:
    """V_1 samples written as an x,value CSV."""
    path = tmp_path / "v1.csv"
    rows = ["x,value"] + [f"{k / sample_table.size!r},{float(v)!r}" for k, v in enumerate(sample_table)]
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture
def write_config(tmp_path: Path):
    """Write a TOML run configuration into tmp_path and return its path."""

    def _write(text: str, name: str = "run.toml") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
