"""Dipolar Bose gas: renormalized coupling, depletion and excitation spectra.

Internal units hbar = m = 1 with the length unit set by a, so g = 4 pi a.
The self-consistent coupling solves

    g' = g + (16 / sqrt(pi)) g sqrt(n a^3) Q5(eps'),   eps' = g eps / g',

by bisection. F(g') = rhs - g' is strictly decreasing on the bracket
[max(g, g eps), g + (16/sqrt(pi)) g sqrt(n a^3) Q5(1)], so the root is unique
when it exists.
"""

import logging
import math

from scipy.optimize import bisect

from ..errors import DomainError, NoStableSolution
from ..models import (
    FOUR_PI,
    Depletion,
    DepletionMode,
    DipolarParams,
    QValue,
    SelfConsistentCoupling,
    SpectrumMode,
    SpectrumPoint,
)
from ..qfunctions import q3, q5

logger = logging.getLogger(__name__)

LHY_PREFACTOR = 64.0 / (15.0 * math.sqrt(math.pi))
CHI_PREFACTOR = 16.0 / math.sqrt(math.pi)
DEPLETION_PREFACTOR = 8.0 / 3.0

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 400


def _gas_parameter(n: float, a: float) -> float:
    """sqrt(n a^3)."""
    return math.sqrt(n * a**3)


def u_kernel(phi_k: float, p: DipolarParams, chi: float = 0.0) -> float:
    """U(k) + chi with U(k) = g [1 + eps_dd (3 cos^2 phi_k - 1)]."""
    return p.g * (1.0 + p.eps_dd * (3.0 * math.cos(phi_k) ** 2 - 1.0)) + chi


def lhy_dipolar(n: float, p: DipolarParams) -> QValue:
    """Dilute LHY energy density (64/15 sqrt(pi)) g n^2 sqrt(n a^3) Q5(eps_dd); complex for eps_dd > 1."""
    if n < 0:
        raise DomainError(f"density must be non-negative, got {n}")
    return q5(p.eps_dd).scaled(LHY_PREFACTOR * p.g * n**2 * _gas_parameter(n, p.a))


def chi_dilute(n: float, p: DipolarParams) -> float:
    """Dilute-limit coupling correction (16/sqrt(pi)) g sqrt(n a^3) Re Q5(eps_dd)."""
    if n < 0:
        raise DomainError(f"density must be non-negative, got {n}")
    return CHI_PREFACTOR * p.g * _gas_parameter(n, p.a) * q5(p.eps_dd).re


def coupling_residual(g_prime: float, n: float, p: DipolarParams) -> float:
    """F(g') = g + (16/sqrt(pi)) g sqrt(n a^3) Q5(g eps / g') - g'."""
    eps_prime = p.g * p.eps_dd / g_prime
    return p.g + CHI_PREFACTOR * p.g * _gas_parameter(n, p.a) * q5(eps_prime).re - g_prime


def coupling_bracket(n: float, p: DipolarParams) -> tuple[float, float]:
    """Bracket [max(g, g eps), g + (16/sqrt(pi)) g sqrt(n a^3) Q5(1)] for g'."""
    lo = max(p.g, p.g * p.eps_dd)
    hi = p.g + CHI_PREFACTOR * p.g * _gas_parameter(n, p.a) * q5(1.0).re
    return lo, hi


def solve_g_prime(n: float, p: DipolarParams, tol: float = DEFAULT_TOL) -> SelfConsistentCoupling:
    """Self-consistent renormalized coupling at density n."""
    if n <= 0:
        raise DomainError(f"density must be positive, got {n}")

    lo, hi = coupling_bracket(n, p)

    if p.eps_dd == 0.0:
        # Q5(0) = 1: closed form in one step
        g_prime = p.g * (1.0 + CHI_PREFACTOR * _gas_parameter(n, p.a))
        return _coupling(g_prime, n, p, (lo, hi), iterations=1)

    f_lo = coupling_residual(lo, n, p)
    if f_lo < 0:
        raise NoStableSolution(
            f"no self-consistent coupling with eps_dd' <= 1 at n={n:.6e} (eps_dd={p.eps_dd})",
            density=n,
            eps_dd=p.eps_dd,
        )

    f_hi = coupling_residual(hi, n, p) if hi > lo else 0.0
    if f_lo == 0.0 or hi <= lo:
        g_prime = lo
        iterations = 0
    elif f_hi >= 0.0:
        g_prime = hi
        iterations = 0
    else:
        g_prime, result = bisect(
            coupling_residual,
            lo,
            hi,
            args=(n, p),
            xtol=0.25 * tol * p.g,  # |F| <= |F'| xtol with |F'| a little above 1
            rtol=4.0 * 2.220446049250313e-16,
            maxiter=MAX_BISECTIONS,
            full_output=True,
        )
        iterations = result.iterations

    coupling = _coupling(g_prime, n, p, (lo, hi), iterations)
    logger.debug(
        "g' at n=%.6e: g'/g=%.12f eps'=%.12f (%d bisections)", n, g_prime / p.g, coupling.eps_dd_prime, iterations
    )
    return coupling


def _coupling(
    g_prime: float, n: float, p: DipolarParams, bracket: tuple[float, float], iterations: int
) -> SelfConsistentCoupling:
    residual = abs(coupling_residual(g_prime, n, p)) / p.g
    return SelfConsistentCoupling(
        g_prime=g_prime,
        eps_dd_prime=p.g * p.eps_dd / g_prime,
        a_prime=g_prime / FOUR_PI,
        chi=g_prime - p.g,
        n=n,
        converged=True,
        bracket=bracket,
        residual=residual,
        iterations=iterations,
    )


def correlation_energy_sc(n: float, p: DipolarParams) -> float:
    """Improved dilute correlation energy (64/15 sqrt(pi)) g n^2 sqrt(n a^3) Q5(eps')."""
    coupling = solve_g_prime(n, p)
    return LHY_PREFACTOR * p.g * n**2 * _gas_parameter(n, p.a) * q5(coupling.eps_dd_prime).re


def correlation_energy_renormalized(n: float, p: DipolarParams) -> float:
    """Correlation energy with renormalized prefactors, (64/15 sqrt(pi)) g' n^2 sqrt(n a'^3) Q5(eps')."""
    coupling = solve_g_prime(n, p)
    return (
        LHY_PREFACTOR
        * coupling.g_prime
        * n**2
        * _gas_parameter(n, coupling.a_prime)
        * q5(coupling.eps_dd_prime).re
    )


def chi_from_correlation_energy(n: float, p: DipolarParams) -> float:
    """Second density derivative of correlation_energy_sc with Q5(eps') held fixed.

    E_C is proportional to n^{5/2}, so chi = (15/4) E_C / n^2, which equals g' - g.
    """
    return 3.75 * correlation_energy_sc(n, p) / n**2


def depletion(n: float, p: DipolarParams, mode: DepletionMode | str = DepletionMode.BOGOLIUBOV) -> Depletion:
    """Quantum depletion fraction, bare (Bogoliubov) or with the renormalized coupling."""
    mode = DepletionMode(mode)
    if n < 0:
        raise DomainError(f"density must be non-negative, got {n}")
    if n == 0:
        return Depletion(fraction=0.0, is_real=True, mode=mode)

    if mode is DepletionMode.BOGOLIUBOV:
        q = q3(p.eps_dd)
        fraction = DEPLETION_PREFACTOR * math.sqrt(n * p.a**3 / math.pi) * q.re
        return Depletion(fraction=fraction, is_real=q.is_real, mode=mode)

    coupling = solve_g_prime(n, p)
    fraction = DEPLETION_PREFACTOR * math.sqrt(n * coupling.a_prime**3 / math.pi) * q3(coupling.eps_dd_prime).re
    return Depletion(fraction=fraction, is_real=True, mode=mode)


def spectrum(
    k: float,
    phi_k: float,
    n: float,
    p: DipolarParams,
    mode: SpectrumMode | str = SpectrumMode.BOGOLIUBOV,
    coupling: SelfConsistentCoupling | None = None,
) -> SpectrumPoint:
    """Excitation energy sqrt(e_k (2 n U + e_k)) with bare or renormalized U.

    A precomputed coupling can be passed to avoid re-solving for every (k, phi).
    """
    mode = SpectrumMode(mode)
    if k < 0:
        raise DomainError(f"wavenumber must be non-negative, got {k}")

    chi = 0.0
    if mode is SpectrumMode.RENORMALIZED:
        chi = (coupling or solve_g_prime(n, p)).chi

    e_k = 0.5 * k**2
    gap = 2.0 * n * u_kernel(phi_k, p, chi) + e_k
    return SpectrumPoint(k=k, phi_k=phi_k, energy=math.sqrt(abs(e_k * gap)), is_real=gap >= 0.0)
