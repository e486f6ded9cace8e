"""Closed-form sector of the equal-mass binary mixture.

Sound speeds of the renormalized Bogoliubov Hamiltonian, the correlation
energy built from them, the dilute-limit LHY energy with its analytic second
derivatives, and the symmetric equation of state. Internal units, hbar = m = 1.

Conventions fixed here:
- c_{hard/soft}^2 = [S +/- D] / 2 with S = g'11 n1 + g'22 n2 and
  D = sqrt((g'11 n1 - g'22 n2)^2 + 4 g'12^2 n1 n2). This is the prefactor that
  reproduces the single-gas speed sqrt(g n) and turns the speed form of E_C
  into the dilute LHY energy exactly.
- The dilute LHY energy uses the hard (+) branch, which gives the
  (1 - a12/a11)^{5/2} coefficient of the symmetric equation of state.
- In the symmetric equation of state n is the total density, n1 = n2 = n/2.
"""

import math

import numpy as np

from ..errors import DomainError, NoDropletError
from ..models import ChiMatrix, DensityPair, MixtureParams, SoundSpeeds

# 8 m^4 / (15 pi^2 hbar^3)
SPEED_PREFACTOR = 8.0 / (15.0 * math.pi**2)
# sqrt(2 m^3) / (15 pi^2 hbar^3)
DILUTE_PREFACTOR = math.sqrt(2.0) / (15.0 * math.pi**2)
# 32 sqrt(2 pi) hbar^2 / (15 m)
EOS_LHY_PREFACTOR = 32.0 * math.sqrt(2.0 * math.pi) / 15.0


def _check_densities(n: DensityPair) -> None:
    if n.n1 < 0 or n.n2 < 0:
        raise DomainError(f"densities must be non-negative, got n1={n.n1}, n2={n.n2}")


def speeds_squared(n1, n2, g11, g22, g12):
    """Signed (c_soft^2, c_hard^2) for scalar or array arguments."""
    s = g11 * n1 + g22 * n2
    d = np.sqrt((g11 * n1 - g22 * n2) ** 2 + 4.0 * g12**2 * n1 * n2)
    return 0.5 * (s - d), 0.5 * (s + d)


def energy_from_speeds_squared(c_soft_sq, c_hard_sq):
    """Correlation energy density from signed squared speeds.

    Only real modes contribute; an imaginary soft mode is dropped.
    """
    hard = np.maximum(c_hard_sq, 0.0) ** 2.5
    soft = np.where(c_soft_sq >= 0.0, np.maximum(c_soft_sq, 0.0) ** 2.5, 0.0)
    return SPEED_PREFACTOR * (hard + soft)


def sound_speeds(n: DensityPair, p: MixtureParams, chi: ChiMatrix | None = None) -> SoundSpeeds:
    """Phonon speeds of the renormalized Hamiltonian with g' = g + chi."""
    _check_densities(n)
    chi = chi or ChiMatrix.zero()
    soft_sq, hard_sq = speeds_squared(
        n.n1, n.n2, p.g11 + chi.chi11, p.g22 + chi.chi22, p.g12 + chi.chi12
    )
    soft_sq, hard_sq = float(soft_sq), float(hard_sq)
    return SoundSpeeds(
        c_soft=math.sqrt(abs(soft_sq)),
        c_hard=math.sqrt(max(hard_sq, 0.0)),
        soft_mode_real=soft_sq >= 0.0,
    )


def correlation_energy_from_speeds(s: SoundSpeeds) -> float:
    """E_C = 8/(15 pi^2) (c_hard^5 + c_soft^5), soft term only when real."""
    soft = s.c_soft**5 if s.soft_mode_real else 0.0
    return SPEED_PREFACTOR * (s.c_hard**5 + soft)


def _linear_form(n: DensityPair, p: MixtureParams) -> tuple[float, float]:
    """(L, D) with L = S + D the hard-branch combination of the dilute energy."""
    s = p.g11 * n.n1 + p.g22 * n.n2
    d = math.sqrt((p.g11 * n.n1 - p.g22 * n.n2) ** 2 + 4.0 * p.g12**2 * n.n1 * n.n2)
    return s + d, d


def lhy_dilute(n: DensityPair, p: MixtureParams) -> float:
    """Dilute-limit LHY energy density, hard branch; always real and >= 0."""
    _check_densities(n)
    linear, _ = _linear_form(n, p)
    return DILUTE_PREFACTOR * linear**2.5


def lhy_dilute_soft(n: DensityPair, p: MixtureParams) -> float:
    """Soft-branch companion of lhy_dilute; zero when that branch is imaginary.

    lhy_dilute + lhy_dilute_soft equals the speed form of E_C at chi = 0.
    """
    _check_densities(n)
    s = p.g11 * n.n1 + p.g22 * n.n2
    _, d = _linear_form(n, p)
    return DILUTE_PREFACTOR * max(s - d, 0.0) ** 2.5


def chi_dilute(n: DensityPair, p: MixtureParams) -> ChiMatrix:
    """Analytic second density derivatives of lhy_dilute."""
    _check_densities(n)
    linear, d = _linear_form(n, p)
    if linear <= 0 or d <= 0:
        raise DomainError(f"dilute LHY energy is not twice differentiable at n1={n.n1}, n2={n.n2}")

    delta = p.g11 * n.n1 - p.g22 * n.n2
    # derivatives of D^2
    q1 = 2.0 * p.g11 * delta + 4.0 * p.g12**2 * n.n2
    q2 = -2.0 * p.g22 * delta + 4.0 * p.g12**2 * n.n1
    q11 = 2.0 * p.g11**2
    q22 = 2.0 * p.g22**2
    q12 = -2.0 * p.g11 * p.g22 + 4.0 * p.g12**2

    l1 = p.g11 + q1 / (2.0 * d)
    l2 = p.g22 + q2 / (2.0 * d)

    def second(qij: float, qi: float, qj: float) -> float:
        return qij / (2.0 * d) - qi * qj / (4.0 * d**3)

    l11 = second(q11, q1, q1)
    l22 = second(q22, q2, q2)
    l12 = second(q12, q1, q2)

    a = DILUTE_PREFACTOR * 3.75 * math.sqrt(linear)
    b = DILUTE_PREFACTOR * 2.5 * linear**1.5
    return ChiMatrix(
        chi11=a * l1 * l1 + b * l11,
        chi12=a * l1 * l2 + b * l12,
        chi22=a * l2 * l2 + b * l22,
    )


def mean_field_energy(n: DensityPair, p: MixtureParams) -> float:
    """Mean-field energy density 1/2 sum g_{ss'} n_s n_s'."""
    _check_densities(n)
    return 0.5 * (p.g11 * n.n1**2 + p.g22 * n.n2**2) + p.g12 * n.n1 * n.n2


# ========== Symmetric equation of state ==========


def eos_coefficients(a11: float, a12: float) -> tuple[float, float]:
    """(A, B) of E/N = A n + B n^{3/2} for g22 = g11, n the total density."""
    if a11 <= 0:
        raise DomainError(f"a11 must be positive, got {a11}")
    if a12 > a11:
        raise DomainError(f"a12 = {a12} exceeds a11 = {a11}; the fluctuation term would be complex")
    mean_field = math.pi * (a11 + a12)
    fluctuation = EOS_LHY_PREFACTOR * a11**2.5 * (1.0 - a12 / a11) ** 2.5
    return mean_field, fluctuation


def eos_symmetric(n_total: float, a11: float, a12: float) -> float:
    """Energy per particle of the symmetric mixture at total density n_total."""
    if n_total < 0:
        raise DomainError(f"density must be non-negative, got {n_total}")
    A, B = eos_coefficients(a11, a12)
    return A * n_total + B * n_total**1.5


def eos_lhy_approx(n_total: float, a11: float, a12: float) -> float:
    """MF+LHY energy per particle with the fluctuation term taken at |a12| = a11."""
    if n_total < 0:
        raise DomainError(f"density must be non-negative, got {n_total}")
    A, _ = eos_coefficients(a11, a12)
    _, B = eos_coefficients(a11, -a11)
    return A * n_total + B * n_total**1.5


def equilibrium_density(a11: float, a12: float) -> float:
    """Total density minimizing E/N, (2A / 3B)^2; requires a12 < -a11."""
    A, B = eos_coefficients(a11, a12)
    if A >= 0:
        raise NoDropletError(f"no self-bound droplet for a12 = {a12} >= -a11 = {-a11}")
    return (2.0 * A / (3.0 * B)) ** 2


def bulk_chemical_potential(a11: float, a12: float) -> float:
    """Chemical potential of the bulk liquid, equal to E/N at the equilibrium density."""
    return eos_symmetric(equilibrium_density(a11, a12), a11, a12)


def healing_length(a11: float, a12: float) -> float:
    """hbar / sqrt(2 m |mu|) at the equilibrium density."""
    return 1.0 / math.sqrt(2.0 * abs(bulk_chemical_potential(a11, a12)))
