"""Tests for data models."""

import math

import pytest
from pydantic import ValidationError

from droplet_dft.models import (
    FOUR_PI,
    ChiMatrix,
    DepletionMode,
    DipolarParams,
    MixtureParams,
    QValue,
    SoundSpeeds,
    SpectrumMode,
)


def test_mode_values():
    """Test enum values used in configs."""
    assert DepletionMode.BOGOLIUBOV.value == "bogoliubov"
    assert DepletionMode.CORRECTED.value == "corrected"
    assert SpectrumMode.RENORMALIZED.value == "renormalized"


def test_mixture_params_from_scattering_lengths():
    """Test g = 4 pi a and the scattering-length properties."""
    p = MixtureParams.from_scattering_lengths(1.0, 2.0, -0.5)
    assert p.g11 == pytest.approx(FOUR_PI)
    assert p.g22 == pytest.approx(2 * FOUR_PI)
    assert p.a12 == pytest.approx(-0.5)
    assert p.miscible


def test_mixture_params_immiscible():
    """Test the miscibility criterion g12^2 < g11 g22."""
    assert not MixtureParams.from_scattering_lengths(1.0, 1.0, -1.1).miscible


@pytest.mark.parametrize("field", ["g11", "g22"])
def test_mixture_params_repulsive(field: str):
    """Test that intraspecies couplings must be positive."""
    values = {"g11": 1.0, "g22": 1.0, "g12": 0.0, field: 0.0}
    with pytest.raises(ValidationError, match="repulsive"):
        MixtureParams(**values)


def test_chi_matrix():
    """Test the zero matrix and symmetry accessor."""
    assert ChiMatrix.zero() == ChiMatrix(chi11=0.0, chi12=0.0, chi22=0.0)
    assert ChiMatrix(chi11=1.0, chi12=2.0, chi22=3.0).chi21 == 2.0


def test_sound_speeds_signed_square():
    """Test that an imaginary soft mode reports a negative c_soft^2."""
    assert SoundSpeeds(c_soft=2.0, c_hard=3.0).c_soft_squared == 4.0
    assert SoundSpeeds(c_soft=2.0, c_hard=3.0, soft_mode_real=False).c_soft_squared == -4.0


def test_dipolar_params():
    """Test DipolarParams construction and validation."""
    p = DipolarParams.from_scattering_length(2.0, 1.2)
    assert p.a == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        DipolarParams(g=1.0, eps_dd=-0.1)


def test_qvalue():
    """Test QValue helpers."""
    value = QValue(re=2.0, im=-1.0)
    assert not value.is_real
    assert value.scaled(3.0) == QValue(re=6.0, im=-3.0)
    assert math.isclose(abs(complex(value)), math.sqrt(5.0))
    assert QValue(re=1.0).is_real
