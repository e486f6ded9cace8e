"""Shared fixtures for droplet-dft tests."""

import pytest

from droplet_dft.models import DipolarParams, MixtureParams


@pytest.fixture
def miscible_mixture() -> MixtureParams:
    """Symmetric mixture with a12 = -a11 / 2 (mean-field stable)."""
    return MixtureParams.from_scattering_lengths(1.0, 1.0, -0.5)


@pytest.fixture
def droplet_mixture() -> MixtureParams:
    """Symmetric mixture with a12 = -1.05 a11 (droplet regime)."""
    return MixtureParams.from_scattering_lengths(1.0, 1.0, -1.05)


@pytest.fixture
def dipolar_gas():
    """Factory for a dipolar gas with a = 1 in internal units."""

    def make(eps_dd: float) -> DipolarParams:
        return DipolarParams.from_scattering_length(1.0, eps_dd)

    return make
