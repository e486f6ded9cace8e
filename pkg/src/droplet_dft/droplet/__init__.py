"""Self-bound droplet density profiles."""

from .profile import (
    CorrelationFunctional,
    DensityProfile,
    DiluteCorrelation,
    ProfileGrid,
    energy_functional,
    initial_profile,
    relax,
)

__all__ = [
    "CorrelationFunctional",
    "DensityProfile",
    "DiluteCorrelation",
    "ProfileGrid",
    "energy_functional",
    "initial_profile",
    "relax",
]
