"""Dipolar-gas commands: gprime, depletion, spectrum, stability."""

import asyncio
import logging
import math

import numpy as np

from ..config import DepletionParams, GPrimeParams, SpectrumParams, StabilityParams
from ..dipolar import (
    correlation_energy_renormalized,
    correlation_energy_sc,
    critical_density_closed_form,
    depletion,
    phase_diagram,
    solve_g_prime,
    spectrum,
    stability_boundary,
)
from ..errors import NoStableSolution
from ..models import DepletionMode, DipolarParams, SelfConsistentCoupling, SpectrumMode
from ..results import Column, ResultTable
from ..sweep import run_sweep
from .base import COUPLING, DENSITY, ENERGY, ENERGY_DENSITY, LENGTH, WAVENUMBER, CommandResult, RunContext

logger = logging.getLogger(__name__)

NAN = float("nan")


def _critical_density(p: DipolarParams) -> float:
    return stability_boundary(p.eps_dd, p) if p.eps_dd > 1.0 else 0.0


async def run_gprime(params: GPrimeParams, ctx: RunContext) -> CommandResult:
    p = params.dipolar_params()
    n = params.density.densities(ctx.units)
    mark = params.on_unstable == "mark"

    def evaluate(density: float) -> tuple[SelfConsistentCoupling, float, float] | None:
        try:
            coupling = solve_g_prime(density, p, params.tol)
        except NoStableSolution:
            if not mark:
                raise
            return None
        return coupling, correlation_energy_sc(density, p), correlation_energy_renormalized(density, p)

    rows = await run_sweep(evaluate, n, ctx.max_concurrent)

    def column(name: str, pick, dimension: dict) -> Column:
        return Column(name=name, values=np.array([pick(r) if r else NAN for r in rows]), dimension=dimension)

    columns = [
        Column(name="n", values=n, dimension=DENSITY),
        column("g_prime", lambda r: r[0].g_prime, COUPLING),
        column("eps_dd_prime", lambda r: r[0].eps_dd_prime, {}),
        column("a_prime", lambda r: r[0].a_prime, LENGTH),
        column("chi", lambda r: r[0].chi, COUPLING),
        column("ec_sc", lambda r: r[1], ENERGY_DENSITY),
        column("ec_renormalized", lambda r: r[2], ENERGY_DENSITY),
        Column(name="stable", values=np.array([r is not None for r in rows]), boolean=True),
    ]
    residuals = [r[0].residual for r in rows if r]
    diagnostics = {
        "eps_dd": p.eps_dd,
        "max_residual": max(residuals) if residuals else None,
        "unstable_points": sum(r is None for r in rows),
        "critical_density": _critical_density(p),
    }
    return CommandResult(table=ResultTable(columns=columns), diagnostics=diagnostics)


async def run_depletion(params: DepletionParams, ctx: RunContext) -> CommandResult:
    p = params.dipolar_params()
    n = params.density.densities(ctx.units)
    mark = params.on_unstable == "mark"
    columns = [Column(name="n", values=n, dimension=DENSITY)]
    unstable = 0

    for mode in params.modes:

        def evaluate(density: float, mode: DepletionMode = mode) -> tuple[float, bool]:
            try:
                result = depletion(density, p, mode)
            except NoStableSolution:
                if not mark:
                    raise
                return NAN, False
            return result.fraction, result.is_real

        rows = await run_sweep(evaluate, n, ctx.max_concurrent)
        unstable += sum(math.isnan(fraction) for fraction, _ in rows)
        columns.append(Column(name=f"depletion_{mode.value}", values=np.array([r[0] for r in rows])))
        columns.append(Column(name=f"{mode.value}_real", values=np.array([r[1] for r in rows]), boolean=True))

    diagnostics = {"eps_dd": p.eps_dd, "unstable_points": unstable, "critical_density": _critical_density(p)}
    return CommandResult(table=ResultTable(columns=columns), diagnostics=diagnostics)


async def run_spectrum(params: SpectrumParams, ctx: RunContext) -> CommandResult:
    p = params.dipolar_params()
    n = params.density.to_internal(ctx.units)
    coupling = None
    if params.mode is SpectrumMode.RENORMALIZED:
        coupling = await asyncio.to_thread(solve_g_prime, n, p)

    ks = params.k.values()
    phis = params.phi.values()
    points = [spectrum(k, phi, n, p, params.mode, coupling) for k in ks for phi in phis]

    columns = [
        Column(name="k", values=np.array([pt.k for pt in points]), dimension=WAVENUMBER),
        Column(name="phi", values=np.array([pt.phi_k for pt in points])),
        Column(name="energy", values=np.array([pt.energy for pt in points]), dimension=ENERGY),
        Column(name="is_real", values=np.array([pt.is_real for pt in points]), boolean=True),
    ]
    diagnostics = {
        "eps_dd": p.eps_dd,
        "density": n,
        "mode": params.mode.value,
        "imaginary_points": sum(not pt.is_real for pt in points),
        "eps_dd_prime": coupling.eps_dd_prime if coupling else None,
    }
    return CommandResult(table=ResultTable(columns=columns), diagnostics=diagnostics, overlayable=False)


async def run_stability(params: StabilityParams, ctx: RunContext) -> CommandResult:
    eps_values = [float(v) for v in params.eps_dd.values()]
    p = DipolarParams.from_scattering_length(1.0, 0.0)
    points = await phase_diagram(eps_values, p, params.tol, ctx.max_concurrent)

    columns = [
        Column(name="eps_dd", values=np.array(eps_values)),
        Column(name="n_critical", values=np.array([pt.n_critical for pt in points]), dimension=DENSITY),
        Column(
            name="n_critical_closed_form",
            values=np.array([critical_density_closed_form(eps) for eps in eps_values]),
            dimension=DENSITY,
        ),
    ]
    return CommandResult(table=ResultTable(columns=columns), diagnostics={"points": len(points)})
