"""Run configuration files (TOML) validated with pydantic.

Everything that influences a computed number comes from here; the
process-level ``Settings`` only carry presentation concerns.
"""
from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, field_validator, model_validator

from core.exceptions import ConfigurationError
from core.logging_config import get_logger
from frequency import Frequency, liouville_builder, parse_frequency_record
from potential import BUILTIN_MODELS, PotentialSpec, builtin_model, load_sample_table

LOGGER = get_logger(__name__)


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# =============================================================================
# Blocks
# =============================================================================


class LiouvilleBlock(_Block):
    """Recursively built Liouville frequency with prescribed beta."""

    beta: float = Field(..., gt=0, description="Target beta")
    depth: int = Field(..., ge=2, description="Number of partial quotients")
    seed_quotient: int = Field(1, ge=1, description="First partial quotient")


class FrequencyBlock(_Block):
    """Exactly one of ``cfrac``, ``rational`` or ``liouville``."""

    cfrac: Optional[Union[List[int], str]] = Field(None, description="Partial quotients a1..aN")
    rational: Optional[str] = Field(None, description='Exact rational "p/q"')
    liouville: Optional[LiouvilleBlock] = None
    depth: Optional[int] = Field(None, ge=1, description="Convergent table depth")

    @field_validator("cfrac")
    @classmethod
    def split_cfrac(cls, v: Optional[Union[List[int], str]]) -> Optional[List[int]]:
        if v is None:
            return None
        values = [int(tok) for tok in v.split()] if isinstance(v, str) else list(v)
        if not values or any(a < 1 for a in values):
            raise ValueError("cfrac needs at least one partial quotient, all >= 1")
        return values

    @model_validator(mode="after")
    def exactly_one_source(self) -> "FrequencyBlock":
        given = [name for name in ("cfrac", "rational", "liouville") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"give exactly one of cfrac, rational, liouville (got {given or 'none'})")
        return self

    def build(self) -> Frequency:
        if self.cfrac is not None:
            return Frequency(tuple(self.cfrac))
        if self.rational is not None:
            return parse_frequency_record(f"rational: {self.rational}")
        lv = self.liouville
        return liouville_builder(lv.beta, lv.depth, seed_quotient=lv.seed_quotient)


class PotentialBlock(_Block):
    """Builtin model name and parameters; ``lambda`` is the constant c for ``constant``."""

    name: str
    coupling: float = Field(..., alias="lambda")
    gamma: Optional[float] = Field(None, gt=0, le=1)
    table_path: Optional[str] = None

    @field_validator("name")
    @classmethod
    def known_model(cls, v: str) -> str:
        if v not in BUILTIN_MODELS:
            raise ValueError(f"unknown model {v!r}; expected one of {BUILTIN_MODELS}")
        return v

    @model_validator(mode="after")
    def model_extras(self) -> "PotentialBlock":
        if self.name == "hoelder_cusp" and self.gamma is None:
            raise ValueError("hoelder_cusp needs gamma")
        if self.name == "separable" and self.table_path is None:
            raise ValueError("separable needs table_path")
        return self

    def build(self, base_dir: Path) -> PotentialSpec:
        params = [self.coupling] + ([self.gamma] if self.name == "hoelder_cusp" else [])
        table = None
        if self.table_path is not None:
            table = load_sample_table(_resolve(base_dir, self.table_path))
        return builtin_model(self.name, params, table=table)


class ScanBlock(_Block):
    """Explicit ``energies`` or a uniform grid {e_min, e_max, n_points}."""

    energies: Optional[List[float]] = None
    e_min: Optional[float] = None
    e_max: Optional[float] = None
    n_points: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def one_grid(self) -> "ScanBlock":
        uniform = (self.e_min, self.e_max, self.n_points)
        if self.energies is not None:
            if any(v is not None for v in uniform):
                raise ValueError("give either energies or e_min/e_max/n_points, not both")
            if not self.energies:
                raise ValueError("energies must not be empty")
            if any(b < a for a, b in zip(self.energies, self.energies[1:])):
                raise ValueError("energies must be sorted ascending")
            return self
        if any(v is None for v in uniform):
            raise ValueError("scan needs energies or all of e_min, e_max, n_points")
        if self.e_max < self.e_min:
            raise ValueError("e_max must be >= e_min")
        return self

    def grid(self) -> list[float]:
        if self.energies is not None:
            return [float(e) for e in self.energies]
        if self.n_points == 1:
            return [float(self.e_min)]
        step = (self.e_max - self.e_min) / (self.n_points - 1)
        return [self.e_min + k * step for k in range(self.n_points)]


class LyapunovBlock(_Block):
    length: float = Field(200.0, ge=10)
    n_phases: int = Field(8, ge=1)
    h: float = Field(1e-3, gt=0, le=1e-2)


class GordonBlock(_Block):
    epsilon: Optional[float] = Field(None, gt=0, description="Default 0.05 * beta_hat")
    margin: float = Field(0.0, ge=0)
    max_q: int = Field(200, ge=1)
    min_q: int = Field(1, ge=1)
    n_phi: int = Field(32, ge=1)
    h: float = Field(1e-3, gt=0, le=1e-2)


class OutputBlock(_Block):
    csv_path: str
    svg_path: Optional[str] = None
    summary_path: Optional[str] = None


class RunConfig(_Block):
    """A whole run configuration file."""

    frequency: FrequencyBlock
    potential: Optional[PotentialBlock] = None
    scan: Optional[ScanBlock] = None
    lyapunov: LyapunovBlock = Field(default_factory=LyapunovBlock)
    gordon: GordonBlock = Field(default_factory=GordonBlock)
    output: Optional[OutputBlock] = None

    _base_dir: Path = PrivateAttr(default_factory=Path.cwd)

    @property
    def base_dir(self) -> Path:
        return self._base_dir

    def resolve(self, path: Optional[str]) -> Optional[Path]:
        """Resolve an output or table path against the config file's directory."""
        return None if path is None else _resolve(self._base_dir, path)

    def require(self, *blocks: str) -> None:
        """
        Raises:
            ConfigurationError: Naming the first missing block.
        """
        for name in blocks:
            if getattr(self, name) is None:
                raise ConfigurationError(f"run configuration needs a [{name}] block")

    def build_frequency(self) -> Frequency:
        return self.frequency.build()

    def build_potential(self) -> PotentialSpec:
        self.require("potential")
        return self.potential.build(self._base_dir)


def _resolve(base_dir: Path, path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else base_dir / p


def _describe(exc: ValidationError) -> str:
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first["loc"]) or "<root>"
    return f"{where}: {first['msg']}"


def load_run_config(path: str | Path) -> RunConfig:
    """
    Parse and validate a TOML run configuration.

    Raises:
        ConfigurationError: Missing file, TOML syntax errors, unknown keys or
            out-of-range values; the message names the offending field.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"configuration file not found: {path}")
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid TOML: {exc}") from exc

    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"{path}: {_describe(exc)}") from exc
    config._base_dir = path.resolve().parent
    LOGGER.debug(f"Loaded run configuration {path}")
    return config


__all__ = [
    "FrequencyBlock",
    "GordonBlock",
    "LiouvilleBlock",
    "LyapunovBlock",
    "OutputBlock",
    "PotentialBlock",
    "RunConfig",
    "ScanBlock",
    "load_run_config",
]
