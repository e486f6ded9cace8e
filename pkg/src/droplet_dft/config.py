"""Run configuration and process settings for droplet-dft."""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import ConfigError
from .models import DepletionMode, DipolarParams, MixtureParams, SpectrumMode
from .sweep import default_concurrency
from .units import UnitSystem, UnitTag, epsilon_dd_from_dipole, load_constants, to_internal

logger = logging.getLogger(__name__)

# Potassium-39, the usual droplet mixture
DEFAULT_MIXTURE_MASS_U = 38.9637064864
# Dysprosium-162
DEFAULT_DIPOLAR_MASS_U = 161.9267984


class Settings(BaseSettings):
    """Process settings from the environment (DROPLET_DFT_THREADS, DROPLET_DFT_LOG_LEVEL)."""

    model_config = SettingsConfigDict(env_prefix="DROPLET_DFT_")

    threads: int = Field(default_factory=default_concurrency, ge=1)
    log_level: str = "INFO"


class Command(str, Enum):
    EOS = "eos"
    SPEEDS = "speeds"
    SELFCONSISTENT = "selfconsistent"
    GPRIME = "gprime"
    DEPLETION = "depletion"
    SPECTRUM = "spectrum"
    STABILITY = "stability"
    PROFILE = "profile"


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class DensityUnit(str, Enum):
    INTERNAL = "internal"
    PER_M3 = "m^-3"
    PER_CM3 = "cm^-3"
    PER_UM3 = "um^-3"


_PER_M3 = {DensityUnit.PER_M3: 1.0, DensityUnit.PER_CM3: 1e6, DensityUnit.PER_UM3: 1e18}


class DensityValue(_Params):
    """A density with an explicit unit tag."""

    value: float = Field(ge=0)
    unit: DensityUnit = DensityUnit.INTERNAL

    def to_internal(self, units: UnitSystem) -> float:
        if self.unit is DensityUnit.INTERNAL:
            return self.value
        return to_internal(self.value * _PER_M3[self.unit], UnitTag.DENSITY, units)


class ValueRange(_Params):
    """Evenly spaced values, linear or logarithmic."""

    start: float
    stop: float
    points: int = Field(default=101, ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _check(self) -> "ValueRange":
        if self.spacing == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log spacing needs positive start and stop")
        return self

    def values(self, scale: float = 1.0) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start * scale, self.stop * scale, self.points)
        return np.linspace(self.start * scale, self.stop * scale, self.points)


class DensityRange(ValueRange):
    """Density sweep; start and stop are in `unit`."""

    start: float = Field(ge=0)
    stop: float = Field(ge=0)
    unit: DensityUnit = DensityUnit.INTERNAL

    def densities(self, units: UnitSystem) -> np.ndarray:
        return self.values(DensityValue(value=1.0, unit=self.unit).to_internal(units))


# ========== Mixture commands ==========


class MixtureInput(_Params):
    """Scattering lengths in Bohr radii; internal lengths are multiples of a11."""

    a11_bohr: float = Field(gt=0)
    a12_bohr: float
    a22_bohr: float | None = Field(default=None, gt=0)
    mass_u: float = Field(default=DEFAULT_MIXTURE_MASS_U, gt=0)

    def unit_system(self) -> UnitSystem:
        return UnitSystem.for_scattering_length(self.a11_bohr, self.mass_u)

    @property
    def a12(self) -> float:
        return self.a12_bohr / self.a11_bohr

    @property
    def a22(self) -> float:
        return (self.a22_bohr or self.a11_bohr) / self.a11_bohr

    def mixture_params(self) -> MixtureParams:
        return MixtureParams.from_scattering_lengths(1.0, self.a22, self.a12)


class SolverInput(_Params):
    damping: float = Field(default=0.5, gt=0, le=1)
    max_iter: int = Field(default=500, ge=0)
    tol: float = Field(default=1e-8, gt=0)
    tol_soft: float = Field(default=1e-10, ge=0)


class AxisInput(_Params):
    lo: DensityValue
    hi: DensityValue
    points: int = Field(default=201, ge=33)


class GridInput(_Params):
    """Per-component density grids; omitted means the default grid around equilibrium."""

    axis1: AxisInput
    axis2: AxisInput | None = None


class EosParams(MixtureInput):
    density: DensityRange
    self_consistent: bool = False
    grid_points: int = Field(default=101, ge=33)
    solver: SolverInput = Field(default_factory=SolverInput)


class SpeedsParams(MixtureInput):
    density: DensityRange
    fraction1: float = Field(default=0.5, ge=0, le=1)


class SelfConsistentParams(MixtureInput):
    grid: GridInput | None = None
    solver: SolverInput = Field(default_factory=SolverInput)


class ProfileParams(MixtureInput):
    atom_number: float = Field(gt=0)
    points_per_healing: float = Field(default=4.0, gt=0)
    radius_factor: float = Field(default=5.0, ge=5.0)
    step: float | None = Field(default=None, gt=0)
    tol: float = Field(default=1e-8, gt=0)
    max_steps: int = Field(default=200_000, ge=1)
    correlation: Literal["dilute", "self_consistent"] = "dilute"
    grid_points: int = Field(default=101, ge=33)
    solver: SolverInput = Field(default_factory=SolverInput)


# ========== Dipolar commands ==========


class DipolarInput(_Params):
    """Scattering length in Bohr radii; eps_dd given directly or from the dipole moment."""

    a_bohr: float = Field(gt=0)
    mass_u: float = Field(default=DEFAULT_DIPOLAR_MASS_U, gt=0)
    eps_dd: float | None = Field(default=None, ge=0)
    dipole_moment_bohr_magneton: float | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _one_strength(self) -> "DipolarInput":
        if (self.eps_dd is None) == (self.dipole_moment_bohr_magneton is None):
            raise ValueError("give exactly one of eps_dd or dipole_moment_bohr_magneton")
        return self

    def unit_system(self) -> UnitSystem:
        return UnitSystem.for_scattering_length(self.a_bohr, self.mass_u)

    def resolved_eps_dd(self) -> float:
        if self.eps_dd is not None:
            return self.eps_dd
        constants = load_constants()
        assert self.dipole_moment_bohr_magneton is not None
        return epsilon_dd_from_dipole(
            self.mass_u * constants.atomic_mass_unit,
            self.dipole_moment_bohr_magneton * constants.bohr_magneton,
            self.a_bohr * constants.bohr_radius,
        )

    def dipolar_params(self) -> DipolarParams:
        return DipolarParams.from_scattering_length(1.0, self.resolved_eps_dd())


class GPrimeParams(DipolarInput):
    density: DensityRange
    tol: float = Field(default=1e-12, gt=0)
    on_unstable: Literal["fail", "mark"] = "fail"


class DepletionParams(DipolarInput):
    density: DensityRange
    modes: list[DepletionMode] = Field(default_factory=lambda: [DepletionMode.BOGOLIUBOV, DepletionMode.CORRECTED])
    on_unstable: Literal["fail", "mark"] = "fail"


class SpectrumParams(DipolarInput):
    density: DensityValue
    k: ValueRange
    phi: ValueRange
    mode: SpectrumMode = SpectrumMode.BOGOLIUBOV


class StabilityParams(_Params):
    a_bohr: float = Field(default=1.0, gt=0)
    mass_u: float = Field(default=DEFAULT_DIPOLAR_MASS_U, gt=0)
    eps_dd: ValueRange
    tol: float = Field(default=1e-10, gt=0)

    def unit_system(self) -> UnitSystem:
        return UnitSystem.for_scattering_length(self.a_bohr, self.mass_u)


CommandParams = (
    EosParams
    | SpeedsParams
    | SelfConsistentParams
    | ProfileParams
    | GPrimeParams
    | DepletionParams
    | SpectrumParams
    | StabilityParams
)

PARAMS_MODELS: dict[Command, type[_Params]] = {
    Command.EOS: EosParams,
    Command.SPEEDS: SpeedsParams,
    Command.SELFCONSISTENT: SelfConsistentParams,
    Command.PROFILE: ProfileParams,
    Command.GPRIME: GPrimeParams,
    Command.DEPLETION: DepletionParams,
    Command.SPECTRUM: SpectrumParams,
    Command.STABILITY: StabilityParams,
}


class LoggingConfig(BaseModel):
    """Logging configuration."""

    model_config = ConfigDict(extra="forbid")

    level: str | None = None


class RunConfig(BaseModel):
    """One command invocation."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    command: Command
    params: CommandParams
    output_path: Path | None = None
    reference_data_path: Path | None = None
    reference_x_scale: float = Field(default=1.0, gt=0)
    reference_y_scale: float = 1.0
    units: Literal["internal", "si"] = "internal"
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @model_validator(mode="before")
    @classmethod
    def _params_for_command(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "command" not in data:
            return data
        try:
            model = PARAMS_MODELS[Command(data["command"])]
        except ValueError:
            return data  # the command field reports the error
        params = data.get("params", {})
        if isinstance(params, dict):
            data = {**data, "params": model.model_validate(params)}
        return data

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Load a run configuration from JSON (.json) or YAML (.yaml, .yml)."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e

        suffix = path.suffix.lower()
        try:
            if suffix == ".json":
                data = json.loads(text)
            elif suffix in (".yaml", ".yml"):
                data = yaml.safe_load(text)
            else:
                raise ConfigError(f"unsupported config format {suffix!r}; use .json, .yaml or .yml")
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"malformed config {path}: {e}") from e

        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must contain a mapping at the top level")
        return cls.model_validate(data)
