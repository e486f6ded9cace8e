"""Internal nondimensionalization and physical-unit conversion.

Internally hbar = m = 1 and lengths are measured in a reference scattering
length (a11 for mixtures, a for dipolar gases). Physical units only appear
at the command-line boundary.
"""

import logging
import math
from enum import Enum
from functools import lru_cache
from importlib.resources import files

from pydantic import BaseModel, ConfigDict, Field, computed_field

from .errors import DomainError

logger = logging.getLogger(__name__)

CONSTANTS_FILE = "constants.txt"


class UnitTag(str, Enum):
    """Physical quantities the CLI converts."""

    LENGTH = "length"
    DENSITY = "density"
    ENERGY = "energy"
    WAVENUMBER = "wavenumber"
    SPEED = "speed"


class PhysicalConstants(BaseModel):
    """Fundamental constants in SI units, frozen in the shipped constants file."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(gt=0)  # J s
    bohr_radius: float = Field(gt=0)  # m
    atomic_mass_unit: float = Field(gt=0)  # kg
    vacuum_permeability: float = Field(gt=0)  # N A^-2
    bohr_magneton: float = Field(gt=0)  # J T^-1


def parse_constants(text: str) -> dict[str, float]:
    """Parse `key = value` lines, ignoring blank lines and `#` comments."""
    values: dict[str, float] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"constants line {line_number}: expected 'key = value', got {raw!r}")
        values[key.strip()] = float(value)
    return values


@lru_cache(maxsize=1)
def load_constants() -> PhysicalConstants:
    """Load the constants file shipped with the package (once per process)."""
    text = files("droplet_dft").joinpath(CONSTANTS_FILE).read_text(encoding="utf-8")
    constants = PhysicalConstants.model_validate(parse_constants(text))
    logger.debug("Loaded physical constants: %s", constants)
    return constants


class UnitSystem(BaseModel):
    """Mapping between internal units (hbar = m = 1) and SI."""

    model_config = ConfigDict(frozen=True)

    length_unit: float = Field(gt=0)  # meters per internal length
    mass_unit: float = Field(gt=0)  # kilograms per internal mass
    hbar: float = Field(default_factory=lambda: load_constants().hbar, gt=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def energy_unit(self) -> float:
        """Joules per internal energy, hbar^2 / (M L^2)."""
        return self.hbar**2 / (self.mass_unit * self.length_unit**2)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def density_unit(self) -> float:
        """Particles per cubic meter per internal density, L^-3."""
        return self.length_unit**-3

    @classmethod
    def for_scattering_length(cls, a_bohr: float, mass_u: float) -> "UnitSystem":
        """Unit system with length unit = a scattering length given in Bohr radii."""
        if a_bohr <= 0:
            raise DomainError(f"reference scattering length must be positive, got {a_bohr} a0")
        if mass_u <= 0:
            raise DomainError(f"mass must be positive, got {mass_u} u")
        constants = load_constants()
        return cls(
            length_unit=a_bohr * constants.bohr_radius,
            mass_unit=mass_u * constants.atomic_mass_unit,
            hbar=constants.hbar,
        )

    def scale(self, tag: UnitTag | str) -> float:
        """SI value of one internal unit of the tagged quantity."""
        try:
            tag = UnitTag(tag)
        except ValueError:
            raise DomainError(f"unknown unit tag: {tag!r}") from None

        if tag is UnitTag.LENGTH:
            return self.length_unit
        if tag is UnitTag.DENSITY:
            return self.density_unit
        if tag is UnitTag.ENERGY:
            return self.energy_unit
        if tag is UnitTag.WAVENUMBER:
            return 1.0 / self.length_unit
        # speed: hbar / (M L)
        return self.hbar / (self.mass_unit * self.length_unit)


def to_internal(value: float, tag: UnitTag | str, u: UnitSystem) -> float:
    """Convert an SI value of the tagged quantity to internal units."""
    return value / u.scale(tag)


def from_internal(value: float, tag: UnitTag | str, u: UnitSystem) -> float:
    """Convert an internal value of the tagged quantity to SI."""
    return value * u.scale(tag)


def dipolar_length(mass: float, dipole_moment: float) -> float:
    """Dipolar length a_dd = mu0 mu^2 m / (12 pi hbar^2) in meters."""
    constants = load_constants()
    return constants.vacuum_permeability * dipole_moment**2 * mass / (12.0 * math.pi * constants.hbar**2)


def epsilon_dd_from_dipole(mass: float, dipole_moment: float, a: float) -> float:
    """Relative dipolar strength eps_dd = a_dd / a.

    Args:
        mass: particle mass in kg
        dipole_moment: magnetic moment in J/T
        a: s-wave scattering length in m
    """
    if a <= 0:
        raise DomainError(f"scattering length must be positive, got {a} m")
    return dipolar_length(mass, dipole_moment) / a

