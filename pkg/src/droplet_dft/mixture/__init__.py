"""Equal-mass binary Bose mixture."""

from .lhy import (
    bulk_chemical_potential,
    chi_dilute,
    correlation_energy_from_speeds,
    eos_coefficients,
    eos_lhy_approx,
    eos_symmetric,
    equilibrium_density,
    healing_length,
    lhy_dilute,
    lhy_dilute_soft,
    mean_field_energy,
    sound_speeds,
)
from .solver import (
    CorrelationTable,
    GridAxis,
    GridSpec,
    SelfConsistentSolver,
    SolverOptions,
    TabulatedCorrelation,
    frozen_curvature,
    solve_self_consistent,
)

__all__ = [
    "CorrelationTable",
    "GridAxis",
    "GridSpec",
    "SelfConsistentSolver",
    "SolverOptions",
    "TabulatedCorrelation",
    "bulk_chemical_potential",
    "chi_dilute",
    "correlation_energy_from_speeds",
    "eos_coefficients",
    "eos_lhy_approx",
    "eos_symmetric",
    "equilibrium_density",
    "frozen_curvature",
    "healing_length",
    "lhy_dilute",
    "lhy_dilute_soft",
    "mean_field_energy",
    "solve_self_consistent",
    "sound_speeds",
]
