"""Data models for droplet-dft.

All quantities are in internal units: hbar = m = 1, lengths in the reference
scattering length. Couplings relate to scattering lengths by g = 4 pi a.
"""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator

FOUR_PI = 4.0 * math.pi


class DepletionMode(str, Enum):
    """Which coupling enters the depletion fraction."""

    BOGOLIUBOV = "bogoliubov"
    CORRECTED = "corrected"


class SpectrumMode(str, Enum):
    """Bare or renormalized interaction in the excitation spectrum."""

    BOGOLIUBOV = "bogoliubov"
    RENORMALIZED = "renormalized"


class QValue(BaseModel):
    """Value of an angular-average function; complex for x > 1."""

    model_config = ConfigDict(frozen=True)

    re: float
    im: float = 0.0

    @property
    def is_real(self) -> bool:
        return self.im == 0.0

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def scaled(self, factor: float) -> "QValue":
        """Multiply both parts by a real factor."""
        return QValue(re=self.re * factor, im=self.im * factor)


# ========== Binary mixture ==========


class MixtureParams(BaseModel):
    """Couplings of an equal-mass two-component Bose gas."""

    model_config = ConfigDict(frozen=True)

    g11: float
    g22: float
    g12: float

    @field_validator("g11", "g22")
    @classmethod
    def _repulsive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("intraspecies couplings must be repulsive (g > 0)")
        return value

    @classmethod
    def from_scattering_lengths(cls, a11: float, a22: float, a12: float) -> "MixtureParams":
        return cls(g11=FOUR_PI * a11, g22=FOUR_PI * a22, g12=FOUR_PI * a12)

    @property
    def a11(self) -> float:
        return self.g11 / FOUR_PI

    @property
    def a22(self) -> float:
        return self.g22 / FOUR_PI

    @property
    def a12(self) -> float:
        return self.g12 / FOUR_PI

    @property
    def miscible(self) -> bool:
        """Mean-field stable mixture, g12^2 < g11 g22."""
        return self.g12**2 < self.g11 * self.g22


class DensityPair(BaseModel):
    """Component densities n1, n2 (operations reject negative values)."""

    model_config = ConfigDict(frozen=True)

    n1: float
    n2: float


class ChiMatrix(BaseModel):
    """Second density derivatives of the correlation energy density."""

    model_config = ConfigDict(frozen=True)

    chi11: float = 0.0
    chi12: float = 0.0
    chi22: float = 0.0

    @classmethod
    def zero(cls) -> "ChiMatrix":
        return cls()

    @property
    def chi21(self) -> float:
        return self.chi12


class SoundSpeeds(BaseModel):
    """Soft and hard phonon speeds of the mixture.

    When the soft mode is imaginary, c_soft holds the magnitude sqrt(|c_soft^2|)
    and soft_mode_real is False.
    """

    model_config = ConfigDict(frozen=True)

    c_soft: float = Field(ge=0)
    c_hard: float = Field(ge=0)
    soft_mode_real: bool = True

    @property
    def c_soft_squared(self) -> float:
        """Signed c_soft^2."""
        return self.c_soft**2 if self.soft_mode_real else -(self.c_soft**2)


# ========== Dipolar gas ==========


class DipolarParams(BaseModel):
    """Single-component dipolar gas with dipoles along z."""

    model_config = ConfigDict(frozen=True)

    g: float = Field(gt=0)
    eps_dd: float = Field(ge=0)

    @classmethod
    def from_scattering_length(cls, a: float, eps_dd: float) -> "DipolarParams":
        return cls(g=FOUR_PI * a, eps_dd=eps_dd)

    @property
    def a(self) -> float:
        return self.g / FOUR_PI


class SelfConsistentCoupling(BaseModel):
    """Converged renormalized coupling g' = g + chi at one density."""

    model_config = ConfigDict(frozen=True)

    g_prime: float
    eps_dd_prime: float
    a_prime: float
    chi: float
    n: float
    converged: bool
    bracket: tuple[float, float]
    residual: float = 0.0
    iterations: int = 0


class SpectrumPoint(BaseModel):
    """One point of the excitation spectrum.

    When is_real is False, energy holds the magnitude of the imaginary value.
    """

    model_config = ConfigDict(frozen=True)

    k: float = Field(ge=0)
    phi_k: float
    energy: float = Field(ge=0)
    is_real: bool


class Depletion(BaseModel):
    """Quantum depletion fraction; is_real is False when only the real part is kept."""

    model_config = ConfigDict(frozen=True)

    fraction: float
    is_real: bool
    mode: DepletionMode
