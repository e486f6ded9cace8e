"""Stability boundary of the renormalized dipolar spectrum.

Above the critical density the self-consistent coupling exists with
eps_dd' <= 1, so U'(k) >= 0 for every direction and the renormalized
spectrum is real. Below it there is no stable solution.
"""

import logging
import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from ..errors import DomainError, NoStableSolution
from ..models import DipolarParams
from ..sweep import run_sweep
from .coupling import solve_g_prime

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
INITIAL_UPPER_DENSITY = 1e-12  # internal units, a^-3
MAX_EXPANSIONS = 200
MAX_BISECTIONS = 200


class PhaseBoundaryPoint(BaseModel):
    """Critical density at one dipolar strength."""

    model_config = ConfigDict(frozen=True)

    eps_dd: float
    n_critical: float


def is_stable(n: float, p: DipolarParams) -> bool:
    """Whether the self-consistent coupling exists at density n."""
    try:
        solve_g_prime(n, p)
    except NoStableSolution:
        return False
    return True


def stability_boundary(eps_dd: float, p: DipolarParams, tol: float = DEFAULT_TOL) -> float:
    """Smallest density at which solve_g_prime succeeds, found by bisection on n.

    Returns 0.0 for eps_dd <= 1, where every density is stable.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if eps_dd <= 1.0:
        return 0.0

    params = p.model_copy(update={"eps_dd": eps_dd})

    lo, hi = 0.0, INITIAL_UPPER_DENSITY
    for _ in range(MAX_EXPANSIONS):
        if is_stable(hi, params):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise DomainError(f"could not bracket the critical density for eps_dd={eps_dd}")

    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if is_stable(mid, params):
            hi = mid
        else:
            lo = mid

    logger.debug("Critical density for eps_dd=%.6f: n a^3 = %.12e", eps_dd, hi * params.a**3)
    return hi


async def phase_diagram(
    eps_values: Sequence[float],
    p: DipolarParams,
    tol: float = DEFAULT_TOL,
    max_concurrent: int | None = None,
) -> list[PhaseBoundaryPoint]:
    """Critical density for each eps_dd, evaluated concurrently."""

    def boundary(eps: float) -> PhaseBoundaryPoint:
        return PhaseBoundaryPoint(eps_dd=eps, n_critical=stability_boundary(eps, p, tol))

    points = await run_sweep(boundary, eps_values, max_concurrent)
    logger.info("Computed stability boundary at %d dipolar strengths", len(points))
    return points


def critical_density_closed_form(eps_dd: float, a: float = 1.0) -> float:
    """Critical density from g' = g eps_dd at eps_dd' = 1, where Q5(1) = 3^{5/2}/6.

    n* a^3 = [6 sqrt(pi) (eps_dd - 1) / (16 3^{5/2})]^2; zero for eps_dd <= 1.
    """
    if a <= 0:
        raise DomainError(f"scattering length must be positive, got {a}")
    if eps_dd <= 1.0:
        return 0.0
    return (6.0 * math.sqrt(math.pi) * (eps_dd - 1.0) / (16.0 * 3.0**2.5)) ** 2 / a**3
