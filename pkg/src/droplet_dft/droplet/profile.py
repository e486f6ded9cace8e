"""Self-bound symmetric binary droplet by normalized gradient flow.

With n1 = n2 = n/2 and psi = sqrt(n) the stationarity condition becomes

    -(1/2) lap(psi) + [2 A n + dE_C/dn] psi = mu psi,

with A the mean-field coefficient of the symmetric equation of state and E_C
either the dilute B n^{5/2} term or a tabulated self-consistent functional.

The radial grid is discretized with shell volumes (finite volumes): each
node i owns the shell [r_i - dr/2, r_i + dr/2] (the first node the ball of
radius dr/2). The discrete Hamiltonian is the exact gradient of the discrete
energy, so gradient-flow steps with a small enough step lower the energy.
Neumann symmetry at r = 0 is built in; psi = 0 at R_max.
"""

import logging
import math
from typing import Protocol

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DomainError, IterationLimitError, NoDropletError
from ..mixture import eos_coefficients, equilibrium_density, healing_length

logger = logging.getLogger(__name__)

MIN_POINTS = 200
DEFAULT_POINTS_PER_HEALING = 4.0
DEFAULT_RADIUS_FACTOR = 5.0
STEP_FRACTION = 0.25  # default step in units of dr^2
ENERGY_SLACK = 1e-12  # relative energy increase tolerated as round-off
MIN_STEP_FRACTION = 1e-8
UNDERFLOW = 1e-120  # psi below this fraction of its maximum is set to zero
SUPER_GAUSSIAN_ORDER = 8
MONOTONE_TOL = 1e-6  # relative to the peak density


class CorrelationFunctional(Protocol):
    """Correlation energy density of the symmetric mixture as a function of total density."""

    def energy_density(self, n: np.ndarray) -> np.ndarray: ...

    def potential(self, n: np.ndarray) -> np.ndarray: ...


class DiluteCorrelation:
    """Dilute LHY functional B n^{5/2}."""

    def __init__(self, a11: float, a12: float):
        _, self.B = eos_coefficients(a11, a12)

    def energy_density(self, n: np.ndarray) -> np.ndarray:
        return self.B * n**2.5

    def potential(self, n: np.ndarray) -> np.ndarray:
        return 2.5 * self.B * n**1.5


class ProfileGrid(BaseModel):
    """Uniform radial grid from 0 to R_max."""

    model_config = ConfigDict(frozen=True)

    r_max: float = Field(gt=0)
    n_points: int = Field(ge=MIN_POINTS)

    @property
    def dr(self) -> float:
        return self.r_max / (self.n_points - 1)

    @property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.n_points)

    @property
    def shell_volumes(self) -> np.ndarray:
        """4 pi x volume of the shell owned by each node."""
        dr = self.dr
        outer = self.r + 0.5 * dr
        inner = np.maximum(self.r - 0.5 * dr, 0.0)
        return 4.0 * math.pi * (outer**3 - inner**3) / 3.0

    @property
    def face_areas(self) -> np.ndarray:
        """4 pi r^2 at the midpoints between nodes."""
        return 4.0 * math.pi * (self.r[:-1] + 0.5 * self.dr) ** 2

    @classmethod
    def for_droplet(
        cls,
        N: float,
        a11: float,
        a12: float,
        points_per_healing: float = DEFAULT_POINTS_PER_HEALING,
        radius_factor: float = DEFAULT_RADIUS_FACTOR,
    ) -> "ProfileGrid":
        """Grid with R_max = radius_factor (N/n_eq)^{1/3} and dr = healing length / points_per_healing."""
        n_eq = equilibrium_density(a11, a12)
        r_max = radius_factor * (N / n_eq) ** (1.0 / 3.0)
        dr = healing_length(a11, a12) / points_per_healing
        n_points = max(MIN_POINTS, math.ceil(r_max / dr) + 1)
        return cls(r_max=r_max, n_points=n_points)


class DensityProfile(BaseModel):
    """Radial density of a droplet with its energies and solver diagnostics."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: ProfileGrid
    n_of_r: np.ndarray
    N: float
    mu: float
    E: float
    E_K: float
    E_I: float
    converged: bool
    residual: float
    iterations: int
    energy_history: list[float] = Field(default_factory=list)
    residual_history: list[float] = Field(default_factory=list)
    self_bound: bool = True
    monotone: bool = True

    @property
    def psi(self) -> np.ndarray:
        return np.sqrt(self.n_of_r)

    @property
    def central_density(self) -> float:
        return float(self.n_of_r[0])


class _Hamiltonian:
    """Discrete energy and Hamiltonian on a fixed grid."""

    def __init__(self, grid: ProfileGrid, a11: float, a12: float, correlation: CorrelationFunctional):
        self.grid = grid
        self.A, _ = eos_coefficients(a11, a12)
        self.correlation = correlation
        self.volumes = grid.shell_volumes
        self.faces = grid.face_areas
        self.dr = grid.dr

    def norm(self, psi: np.ndarray) -> float:
        return float(np.dot(self.volumes, psi**2))

    def energies(self, psi: np.ndarray) -> tuple[float, float]:
        """(E_K, E_I)."""
        e_k = 0.5 * float(np.dot(self.faces, np.diff(psi) ** 2)) / self.dr
        n = psi**2
        e_i = float(np.dot(self.volumes, self.A * n**2 + self.correlation.energy_density(n)))
        return e_k, e_i

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """H psi, zero at the Dirichlet node."""
        flux = self.faces * np.diff(psi) / self.dr
        divergence = np.zeros_like(psi)
        divergence[:-1] -= flux
        divergence[1:] += flux
        n = psi**2
        h_psi = divergence / (2.0 * self.volumes) + (2.0 * self.A * n + self.correlation.potential(n)) * psi
        h_psi[-1] = 0.0
        return h_psi

    def chemical_potential(self, psi: np.ndarray, h_psi: np.ndarray) -> float:
        return float(np.dot(self.volumes, psi * h_psi)) / self.norm(psi)


def _normalize(psi: np.ndarray, ham: _Hamiltonian, N: float) -> np.ndarray:
    psi = np.maximum(psi, 0.0)
    psi[-1] = 0.0
    psi[psi < UNDERFLOW * psi.max()] = 0.0
    return psi * math.sqrt(N / ham.norm(psi))


def initial_profile(N: float, a11: float, a12: float, grid: ProfileGrid) -> np.ndarray:
    """Super-Gaussian density of radius (3N / (4 pi n_eq))^{1/3}, normalized to N."""
    n_eq = equilibrium_density(a11, a12)
    radius = (3.0 * N / (4.0 * math.pi * n_eq)) ** (1.0 / 3.0)
    density = n_eq * np.exp(-((grid.r / radius) ** SUPER_GAUSSIAN_ORDER))
    density *= N / float(np.dot(grid.shell_volumes, density))
    return density


def energy_functional(
    profile: DensityProfile | tuple[ProfileGrid, np.ndarray],
    a11: float,
    a12: float,
    correlation: CorrelationFunctional | None = None,
) -> tuple[float, float, float]:
    """(E_K, E_I, E_total) of a radial density profile."""
    grid, density = (profile.grid, profile.n_of_r) if isinstance(profile, DensityProfile) else profile
    density = np.asarray(density, dtype=float)
    if np.any(density < 0):
        raise DomainError("density profile has negative nodes")
    ham = _Hamiltonian(grid, a11, a12, correlation or DiluteCorrelation(a11, a12))
    e_k, e_i = ham.energies(np.sqrt(density))
    return e_k, e_i, e_k + e_i


def relax(
    N: float,
    a11: float,
    a12: float,
    grid: ProfileGrid | None = None,
    step: float | None = None,
    tol: float = 1e-8,
    max_steps: int = 200_000,
    correlation: CorrelationFunctional | None = None,
    initial: np.ndarray | None = None,
) -> DensityProfile:
    """Ground-state droplet of N atoms by normalized gradient flow.

    Each step is psi <- psi - step (H psi - mu psi) with mu = <psi|H|psi>/<psi|psi>,
    followed by renormalization to N. A step that raises the energy is retried
    with half the step size. Converged when max|H psi - mu psi| / (|mu| max psi) < tol.

    Args:
        N: total atom number
        a11, a12: scattering lengths (internal units, a12 < -a11)
        grid: radial grid (default: ProfileGrid.for_droplet)
        step: gradient-flow step (default: 0.25 dr^2)
        tol: residual tolerance
        max_steps: accepted-step limit
        correlation: correlation functional (default: dilute LHY)
        initial: starting density on the grid (default: super-Gaussian)
    """
    if a12 >= -a11:
        raise NoDropletError(f"no self-bound droplet for a12 = {a12} >= -a11 = {-a11}")
    if N <= 0:
        raise DomainError(f"atom number must be positive, got {N}")

    grid = grid or ProfileGrid.for_droplet(N, a11, a12)
    ham = _Hamiltonian(grid, a11, a12, correlation or DiluteCorrelation(a11, a12))
    step = step if step is not None else STEP_FRACTION * grid.dr**2
    min_step = MIN_STEP_FRACTION * step

    density = initial_profile(N, a11, a12, grid) if initial is None else np.asarray(initial, dtype=float)
    if density.shape != grid.r.shape:
        raise DomainError("initial density does not match the grid")
    psi = _normalize(np.sqrt(np.maximum(density, 0.0)), ham, N)

    e_k, e_i = ham.energies(psi)
    energy = e_k + e_i
    energy_history = [energy]
    residual_history: list[float] = []

    logger.info("Relaxing droplet: N=%.6e, %d radial points, dr=%.4e, step=%.4e", N, grid.n_points, grid.dr, step)

    converged = False
    accepted = 0
    while True:
        h_psi = ham.apply(psi)
        mu = ham.chemical_potential(psi, h_psi)
        gradient = h_psi - mu * psi
        gradient[-1] = 0.0
        residual = float(np.abs(gradient).max()) / (abs(mu) * float(psi.max()))
        residual_history.append(residual)

        if residual < tol:
            converged = True
            break
        if accepted >= max_steps:
            break

        while True:
            trial = _normalize(psi - step * gradient, ham, N)
            trial_k, trial_i = ham.energies(trial)
            if trial_k + trial_i <= energy + ENERGY_SLACK * abs(energy):
                break
            step *= 0.5
            logger.debug("Energy increased; halving step to %.4e", step)
            if step < min_step:
                raise IterationLimitError(
                    f"step size underflow after {accepted} steps (residual {residual:.3e})",
                    residual_history=residual_history,
                )

        psi, e_k, e_i = trial, trial_k, trial_i
        energy = e_k + e_i
        energy_history.append(energy)
        accepted += 1
        if accepted % 1000 == 0:
            logger.debug("Step %d: E=%.12e mu=%.12e residual=%.3e", accepted, energy, mu, residual)

    if not converged:
        logger.error("Droplet relaxation did not converge in %d steps", max_steps)
        raise IterationLimitError(
            f"droplet relaxation did not converge in {max_steps} steps (residual {residual_history[-1]:.3e})",
            residual_history=residual_history,
        )

    n_of_r = psi**2
    self_bound = energy < 0
    monotone = bool(np.all(np.diff(n_of_r) <= MONOTONE_TOL * n_of_r.max()))
    if not self_bound:
        logger.warning("Droplet with N=%.6e is not self-bound (E=%.6e >= 0)", N, energy)
    if not monotone:
        logger.warning("Converged density is not monotone in r")

    logger.info("Droplet converged after %d steps: E=%.10e mu=%.10e n(0)=%.6e", accepted, energy, mu, n_of_r[0])
    return DensityProfile(
        grid=grid,
        n_of_r=n_of_r,
        N=N,
        mu=mu,
        E=energy,
        E_K=e_k,
        E_I=e_i,
        converged=True,
        residual=residual_history[-1],
        iterations=accepted,
        energy_history=energy_history,
        residual_history=residual_history,
        self_bound=self_bound,
        monotone=monotone,
    )
