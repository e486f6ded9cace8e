"""Self-consistent correlation energy of the binary mixture on a density grid.

Each sweep takes, at every grid node, the density curvature of E_C built from
the renormalized sound speeds with that node's couplings g' = g + chi held
fixed, and mixes it into the old chi with damping alpha. Nodes are independent
within a sweep; the chi update is a serial barrier per sweep.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.interpolate import CubicSpline, RectBivariateSpline

from ..errors import DomainError, IterationLimitError
from ..models import ChiMatrix, DensityPair, MixtureParams, SoundSpeeds
from .lhy import energy_from_speeds_squared, equilibrium_density, sound_speeds, speeds_squared

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 33
DEFAULT_GRID_POINTS = 201
DEFAULT_GRID_SPAN = (0.05, 4.0)  # in units of the per-component equilibrium density
MONOTONE_WINDOW = 10
STENCIL_STEP = 1e-3  # relative to the local density


class GridAxis(BaseModel):
    """Uniform density grid along one component."""

    model_config = ConfigDict(frozen=True)

    lo: float = Field(gt=0)
    hi: float = Field(gt=0)
    points: int = Field(default=DEFAULT_GRID_POINTS, ge=MIN_GRID_POINTS)

    @model_validator(mode="after")
    def _increasing(self) -> "GridAxis":
        if self.hi <= self.lo:
            raise ValueError(f"grid must be strictly increasing, got lo={self.lo}, hi={self.hi}")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


class GridSpec(BaseModel):
    """Density grids for both components."""

    model_config = ConfigDict(frozen=True)

    axis1: GridAxis
    axis2: GridAxis

    @classmethod
    def around_equilibrium(cls, p: MixtureParams, points: int = DEFAULT_GRID_POINTS) -> "GridSpec":
        """Default grid spanning [0.05, 4] x n_eq per component (needs a droplet regime)."""
        per_component = 0.5 * equilibrium_density(p.a11, p.a12)
        lo, hi = DEFAULT_GRID_SPAN
        axis = GridAxis(lo=lo * per_component, hi=hi * per_component, points=points)
        return cls(axis1=axis, axis2=axis)


class SolverOptions(BaseModel):
    """Tolerances and damping of the fixed-point iteration."""

    model_config = ConfigDict(frozen=True)

    damping: float = Field(default=0.5, gt=0, le=1)
    max_iter: int = Field(default=500, ge=0)
    tol: float = Field(default=1e-8, gt=0)
    tol_soft: float = Field(default=1e-10, ge=0)  # relative to g11 * (n1 + n2)


class CorrelationTable(BaseModel):
    """Gridded E_C(n1, n2) with its second-derivative matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: MixtureParams
    grid1: np.ndarray
    grid2: np.ndarray
    ec: np.ndarray
    chi11: np.ndarray
    chi12: np.ndarray
    chi22: np.ndarray
    c_soft_squared: np.ndarray
    converged: bool
    residual: float
    iterations: int
    residual_history: list[float] = Field(default_factory=list)
    residual_monotone: bool = True
    soft_mode_real: bool = True
    soft_imaginary_points: int = 0

    def chi_at(self, i: int, j: int) -> ChiMatrix:
        return ChiMatrix(chi11=float(self.chi11[i, j]), chi12=float(self.chi12[i, j]), chi22=float(self.chi22[i, j]))

    def speeds_at(self, i: int, j: int) -> SoundSpeeds:
        n = DensityPair(n1=float(self.grid1[i]), n2=float(self.grid2[j]))
        return sound_speeds(n, self.params, self.chi_at(i, j))

    def nearest_index(self, n1: float, n2: float) -> tuple[int, int]:
        return int(np.abs(self.grid1 - n1).argmin()), int(np.abs(self.grid2 - n2).argmin())

    def _check_inside(self, n1: float, n2: float) -> None:
        if not (self.grid1[0] <= n1 <= self.grid1[-1] and self.grid2[0] <= n2 <= self.grid2[-1]):
            raise DomainError(f"({n1}, {n2}) lies outside the tabulated grid")

    def interpolate(self, n1: float, n2: float) -> tuple[float, ChiMatrix]:
        """Cubic-spline interpolation of E_C and chi inside the grid."""
        self._check_inside(n1, n2)

        def ev(values: np.ndarray) -> float:
            return float(RectBivariateSpline(self.grid1, self.grid2, values).ev(n1, n2))

        chi = ChiMatrix(chi11=ev(self.chi11), chi12=ev(self.chi12), chi22=ev(self.chi22))
        return ev(self.ec), chi

    def symmetric_functional(self) -> "TabulatedCorrelation":
        """E_C(n/2, n/2) along the diagonal as a functional of the total density."""
        if self.grid1.shape != self.grid2.shape or not np.allclose(self.grid1, self.grid2, rtol=1e-12):
            raise DomainError("symmetric functional needs identical grids for both components")
        return TabulatedCorrelation(2.0 * self.grid1, np.diagonal(self.ec).copy())


class TabulatedCorrelation:
    """Correlation energy density of the symmetric mixture from a table diagonal.

    Stores s(n) = E_C / n^{5/2} as a cubic spline; outside the tabulated range
    s is held at its end value, so E_C continues with the dilute n^{5/2} law.
    """

    def __init__(self, n_total: np.ndarray, ec: np.ndarray):
        self.n_min = float(n_total[0])
        self.n_max = float(n_total[-1])
        self._spline = CubicSpline(n_total, ec / n_total**2.5)
        self._slope = self._spline.derivative()

    def _shape(self, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        clipped = np.clip(n, self.n_min, self.n_max)
        inside = (n >= self.n_min) & (n <= self.n_max)
        return self._spline(clipped), np.where(inside, self._slope(clipped), 0.0)

    def energy_density(self, n: np.ndarray) -> np.ndarray:
        s, _ = self._shape(n)
        return s * n**2.5

    def potential(self, n: np.ndarray) -> np.ndarray:
        """dE_C/dn."""
        s, ds = self._shape(n)
        return ds * n**2.5 + 2.5 * s * n**1.5


def frozen_curvature(
    n1: np.ndarray,
    n2: np.ndarray,
    g11: np.ndarray | float,
    g22: np.ndarray | float,
    g12: np.ndarray | float,
    step: float = STENCIL_STEP,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Second derivatives of E_C(n1, n2) with the couplings held fixed at each node.

    Central differences on a local stencil of relative width `step`; densities
    must be positive.
    """
    h1 = step * n1
    h2 = step * n2

    def ec(d1: int, d2: int) -> np.ndarray:
        soft_sq, hard_sq = speeds_squared(n1 + d1 * h1, n2 + d2 * h2, g11, g22, g12)
        return energy_from_speeds_squared(soft_sq, hard_sq)

    centre = ec(0, 0)
    f11 = (ec(1, 0) - 2.0 * centre + ec(-1, 0)) / h1**2
    f22 = (ec(0, 1) - 2.0 * centre + ec(0, -1)) / h2**2
    f12 = (ec(1, 1) - ec(1, -1) - ec(-1, 1) + ec(-1, -1)) / (4.0 * h1 * h2)
    return f11, f12, f22


class SelfConsistentSolver:
    """Damped fixed-point iteration for chi_{ss'} = d^2 E_C / dn_s dn_s'."""

    def __init__(self, params: MixtureParams, grid: GridSpec, options: SolverOptions | None = None):
        self.params = params
        self.grid = grid
        self.options = options or SolverOptions()
        self.grid1 = grid.axis1.values()
        self.grid2 = grid.axis2.values()
        self.n1, self.n2 = np.meshgrid(self.grid1, self.grid2, indexing="ij")

    def _couplings(self, chi: tuple[np.ndarray, np.ndarray, np.ndarray]) -> tuple[np.ndarray, ...]:
        chi11, chi12, chi22 = chi
        p = self.params
        return p.g11 + chi11, p.g22 + chi22, p.g12 + chi12

    def evaluate(self, chi: tuple[np.ndarray, np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
        """Pointwise E_C and signed c_soft^2 at couplings g + chi."""
        soft_sq, hard_sq = speeds_squared(self.n1, self.n2, *self._couplings(chi))
        return energy_from_speeds_squared(soft_sq, hard_sq), soft_sq

    def curvature(self, chi: tuple[np.ndarray, np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Updated chi: the density curvature of E_C at each node's own couplings g + chi."""
        return frozen_curvature(self.n1, self.n2, *self._couplings(chi))

    def residual(self, old: tuple[np.ndarray, ...], new: tuple[np.ndarray, ...]) -> float:
        """max |delta chi| / g11 over the grid."""
        deltas = [np.abs(b - a).max() for a, b in zip(old, new, strict=True)]
        return float(np.max(deltas)) / self.params.g11

    def solve(self) -> CorrelationTable:
        opts = self.options
        zeros = np.zeros_like(self.n1)
        chi: tuple[np.ndarray, np.ndarray, np.ndarray] = (zeros, zeros.copy(), zeros.copy())
        history: list[float] = []

        logger.info(
            "Solving self-consistent E_C on %dx%d grid (damping=%s, tol=%s, max_iter=%d)",
            len(self.grid1),
            len(self.grid2),
            opts.damping,
            opts.tol,
            opts.max_iter,
        )

        if opts.max_iter == 0:
            # evaluation only: bare couplings, chi taken from the bare E_C
            ec, soft_sq = self.evaluate(chi)
            return self._table(ec, self.curvature(chi), soft_sq, False, history)

        converged = False
        for iteration in range(1, opts.max_iter + 1):
            target = self.curvature(chi)
            residual = self.residual(chi, target)
            history.append(residual)
            if not math.isfinite(residual):
                logger.error("Self-consistent solver produced a non-finite residual at sweep %d", iteration)
                raise IterationLimitError(
                    f"self-consistent E_C diverged at sweep {iteration} (residual {residual})",
                    residual_history=history,
                )
            alpha = opts.damping
            chi = (
                chi[0] + alpha * (target[0] - chi[0]),
                chi[1] + alpha * (target[1] - chi[1]),
                chi[2] + alpha * (target[2] - chi[2]),
            )
            logger.debug("Sweep %d: residual=%.3e", iteration, residual)
            if residual < opts.tol:
                converged = True
                break

        if not converged:
            logger.error("Self-consistent solver did not converge after %d sweeps", opts.max_iter)
            raise IterationLimitError(
                f"self-consistent E_C did not converge in {opts.max_iter} sweeps (residual {history[-1]:.3e})",
                residual_history=history,
            )

        logger.info("Converged after %d sweeps (residual=%.3e)", len(history), history[-1])
        ec, soft_sq = self.evaluate(chi)
        return self._table(ec, chi, soft_sq, True, history)

    def _table(
        self,
        ec: np.ndarray,
        chi: tuple[np.ndarray, np.ndarray, np.ndarray],
        soft_sq: np.ndarray,
        converged: bool,
        history: list[float],
    ) -> CorrelationTable:
        interior = (slice(1, -1), slice(1, -1))
        floor = -self.options.tol_soft * self.params.g11 * (self.n1 + self.n2)
        imaginary = int(np.count_nonzero(soft_sq[interior] < floor[interior]))
        if converged and imaginary:
            logger.warning("Soft mode still imaginary at %d interior grid points after convergence", imaginary)

        tail = history[-MONOTONE_WINDOW:]
        monotone = all(b <= a for a, b in zip(tail, tail[1:], strict=False))
        if converged and not monotone:
            logger.warning("Fixed-point residual was not monotone over the last %d sweeps", len(tail))

        return CorrelationTable(
            params=self.params,
            grid1=self.grid1,
            grid2=self.grid2,
            ec=ec,
            chi11=chi[0],
            chi12=chi[1],
            chi22=chi[2],
            c_soft_squared=soft_sq,
            converged=converged,
            residual=history[-1] if history else float("nan"),
            iterations=len(history),
            residual_history=history,
            residual_monotone=monotone,
            soft_mode_real=imaginary == 0,
            soft_imaginary_points=imaginary,
        )


def solve_self_consistent(
    p: MixtureParams,
    grid: GridSpec | None = None,
    options: SolverOptions | None = None,
) -> CorrelationTable:
    """Self-consistent correlation table; the default grid brackets the droplet equilibrium."""
    grid = grid or GridSpec.around_equilibrium(p)
    return SelfConsistentSolver(p, grid, options).solve()
