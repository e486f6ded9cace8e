"""Single-component dipolar Bose gas."""

from .coupling import (
    chi_dilute,
    chi_from_correlation_energy,
    correlation_energy_renormalized,
    correlation_energy_sc,
    coupling_bracket,
    coupling_residual,
    depletion,
    lhy_dipolar,
    solve_g_prime,
    spectrum,
    u_kernel,
)
from .stability import (
    PhaseBoundaryPoint,
    critical_density_closed_form,
    is_stable,
    phase_diagram,
    stability_boundary,
)

__all__ = [
    "PhaseBoundaryPoint",
    "chi_dilute",
    "chi_from_correlation_energy",
    "correlation_energy_renormalized",
    "correlation_energy_sc",
    "coupling_bracket",
    "critical_density_closed_form",
    "coupling_residual",
    "depletion",
    "is_stable",
    "lhy_dipolar",
    "phase_diagram",
    "solve_g_prime",
    "spectrum",
    "stability_boundary",
    "u_kernel",
]
