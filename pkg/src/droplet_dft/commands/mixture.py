"""Binary-mixture commands: eos, speeds, selfconsistent, profile."""

import asyncio
import logging

import numpy as np

from ..config import AxisInput, EosParams, GridInput, ProfileParams, SelfConsistentParams, SolverInput, SpeedsParams
from ..droplet import ProfileGrid, relax
from ..errors import ConfigError
from ..mixture import (
    CorrelationTable,
    GridAxis,
    GridSpec,
    SolverOptions,
    correlation_energy_from_speeds,
    eos_coefficients,
    eos_lhy_approx,
    eos_symmetric,
    equilibrium_density,
    lhy_dilute,
    solve_self_consistent,
    sound_speeds,
)
from ..models import DensityPair, MixtureParams
from ..results import Column, ResultTable
from ..units import UnitTag, from_internal
from .base import COUPLING, DENSITY, ENERGY, ENERGY_DENSITY, LENGTH, SPEED, CommandResult, RunContext

logger = logging.getLogger(__name__)


def _solver_options(solver: SolverInput) -> SolverOptions:
    return SolverOptions(**solver.model_dump())


def _require_symmetric(params: EosParams | ProfileParams) -> None:
    if params.a22_bohr is not None and params.a22_bohr != params.a11_bohr:
        raise ConfigError("the symmetric mixture needs a22_bohr equal to a11_bohr", key="params.a22_bohr")


async def _solve_table(p: MixtureParams, grid: GridSpec, solver: SolverInput) -> CorrelationTable:
    return await asyncio.to_thread(solve_self_consistent, p, grid, _solver_options(solver))


def _table_diagnostics(table: CorrelationTable) -> dict:
    return {
        "converged": table.converged,
        "iterations": table.iterations,
        "residual": table.residual,
        "residual_monotone": table.residual_monotone,
        "soft_mode_real": table.soft_mode_real,
        "soft_imaginary_points": table.soft_imaginary_points,
    }


async def run_eos(params: EosParams, ctx: RunContext) -> CommandResult:
    _require_symmetric(params)
    a12 = params.a12
    n = params.density.densities(ctx.units)
    A, _ = eos_coefficients(1.0, a12)

    columns = [
        Column(name="n", values=n, dimension=DENSITY),
        Column(name="e_per_particle", values=np.array([eos_symmetric(v, 1.0, a12) for v in n]), dimension=ENERGY),
        Column(
            name="e_per_particle_lhy_approx",
            values=np.array([eos_lhy_approx(v, 1.0, a12) for v in n]),
            dimension=ENERGY,
        ),
        Column(name="e_per_particle_mf", values=A * n, dimension=ENERGY),
    ]
    diagnostics: dict = {"a12_over_a11": a12}
    if a12 < -1.0:
        n_eq = equilibrium_density(1.0, a12)
        diagnostics.update(equilibrium_density=n_eq, e_per_particle_min=eos_symmetric(n_eq, 1.0, a12))

    if params.self_consistent:
        p = params.mixture_params()
        table = await _solve_table(p, GridSpec.around_equilibrium(p, params.grid_points), params.solver)
        functional = table.symmetric_functional()
        positive = n > 0
        e_sc = np.zeros_like(n)
        e_sc[positive] = A * n[positive] + functional.energy_density(n[positive]) / n[positive]
        columns.append(Column(name="e_per_particle_sc", values=e_sc, dimension=ENERGY))
        diagnostics["self_consistent"] = _table_diagnostics(table)

    return CommandResult(table=ResultTable(columns=columns), diagnostics=diagnostics)


async def run_speeds(params: SpeedsParams, ctx: RunContext) -> CommandResult:
    p = params.mixture_params()
    n = params.density.densities(ctx.units)
    pairs = [DensityPair(n1=params.fraction1 * v, n2=(1.0 - params.fraction1) * v) for v in n]
    speeds = [sound_speeds(pair, p) for pair in pairs]
    ec = np.array([correlation_energy_from_speeds(s) for s in speeds])

    columns = [
        Column(name="n", values=n, dimension=DENSITY),
        Column(name="c_soft", values=np.array([s.c_soft for s in speeds]), dimension=SPEED),
        Column(name="c_hard", values=np.array([s.c_hard for s in speeds]), dimension=SPEED),
        Column(name="soft_mode_real", values=np.array([s.soft_mode_real for s in speeds]), boolean=True),
        Column(name="ec", values=ec, dimension=ENERGY_DENSITY),
        Column(name="ec_dilute", values=np.array([lhy_dilute(pair, p) for pair in pairs]), dimension=ENERGY_DENSITY),
    ]
    return CommandResult(
        table=ResultTable(columns=columns),
        diagnostics={"miscible": p.miscible, "imaginary_soft_points": sum(not s.soft_mode_real for s in speeds)},
    )


def _grid_spec(grid: GridInput | None, p: MixtureParams, ctx: RunContext) -> GridSpec:
    if grid is None:
        return GridSpec.around_equilibrium(p)

    def axis(given: AxisInput) -> GridAxis:
        return GridAxis(lo=given.lo.to_internal(ctx.units), hi=given.hi.to_internal(ctx.units), points=given.points)

    first = axis(grid.axis1)
    return GridSpec(axis1=first, axis2=axis(grid.axis2) if grid.axis2 else first)


async def run_selfconsistent(params: SelfConsistentParams, ctx: RunContext) -> CommandResult:
    p = params.mixture_params()
    table = await _solve_table(p, _grid_spec(params.grid, p, ctx), params.solver)

    n1, n2 = np.meshgrid(table.grid1, table.grid2, indexing="ij")
    columns = [
        Column(name="n1", values=n1.ravel(), dimension=DENSITY),
        Column(name="n2", values=n2.ravel(), dimension=DENSITY),
        Column(name="ec", values=table.ec.ravel(), dimension=ENERGY_DENSITY),
        Column(name="chi11", values=table.chi11.ravel(), dimension=COUPLING),
        Column(name="chi12", values=table.chi12.ravel(), dimension=COUPLING),
        Column(name="chi22", values=table.chi22.ravel(), dimension=COUPLING),
    ]

    diagnostics = _table_diagnostics(table)
    if p.a12 < -1.0 and p.g22 == p.g11:
        half = 0.5 * equilibrium_density(1.0, p.a12)
        i, j = table.nearest_index(half, half)
        speeds = table.speeds_at(i, j)
        diagnostics["equilibrium_c_soft_squared"] = speeds.c_soft_squared
        diagnostics["equilibrium_soft_mode_real"] = speeds.soft_mode_real
        logger.info("Soft mode at the equilibrium density: c_soft^2=%.6e", speeds.c_soft_squared)

    return CommandResult(table=ResultTable(columns=columns), diagnostics=diagnostics, overlayable=False)


async def run_profile(params: ProfileParams, ctx: RunContext) -> CommandResult:
    _require_symmetric(params)
    a12 = params.a12
    N = params.atom_number
    grid = ProfileGrid.for_droplet(N, 1.0, a12, params.points_per_healing, params.radius_factor)

    correlation = None
    diagnostics: dict = {}
    if params.correlation == "self_consistent":
        p = params.mixture_params()
        table = await _solve_table(p, GridSpec.around_equilibrium(p, params.grid_points), params.solver)
        correlation = table.symmetric_functional()
        diagnostics["self_consistent"] = _table_diagnostics(table)

    profile = await asyncio.to_thread(
        relax,
        N,
        1.0,
        a12,
        grid=grid,
        step=params.step,
        tol=params.tol,
        max_steps=params.max_steps,
        correlation=correlation,
    )

    mu, energy = profile.mu, profile.E
    if ctx.si:
        mu = from_internal(mu, UnitTag.ENERGY, ctx.units)
        energy = from_internal(energy, UnitTag.ENERGY, ctx.units)

    diagnostics.update(
        converged=profile.converged,
        iterations=profile.iterations,
        residual=profile.residual,
        E_K=profile.E_K,
        E_I=profile.E_I,
        self_bound=profile.self_bound,
        monotone=profile.monotone,
        central_density=profile.central_density,
        equilibrium_density=equilibrium_density(1.0, a12),
        radial_points=grid.n_points,
        dr=grid.dr,
    )
    table = ResultTable(
        columns=[
            Column(name="r", values=grid.r, dimension=LENGTH),
            Column(name="n", values=profile.n_of_r, dimension=DENSITY),
        ],
        footer=[f"N={N:.11e}, mu={mu:.11e}, E={energy:.11e}"],
    )
    return CommandResult(table=table, diagnostics=diagnostics, overlayable=False)


