"""Tests for internal units and physical constants."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants as sc

from droplet_dft.errors import DomainError
from droplet_dft.units import (
    UnitSystem,
    UnitTag,
    dipolar_length,
    epsilon_dd_from_dipole,
    from_internal,
    load_constants,
    parse_constants,
    to_internal,
)


class TestConstants:
    """Test the shipped constants file."""

    def test_parse_constants_skips_comments(self):
        """Test that comments and blank lines are ignored."""
        values = parse_constants("# header\n\nhbar = 1.5  # J s\nbohr_radius=2e-11\n")
        assert values == {"hbar": 1.5, "bohr_radius": 2e-11}

    def test_parse_constants_rejects_bad_line(self):
        """Test that a line without '=' is an error."""
        with pytest.raises(ValueError, match="line 2"):
            parse_constants("hbar = 1\nbohr_radius 2\n")

    def test_constants_match_scipy(self):
        """Test the shipped values against scipy.constants."""
        constants = load_constants()
        assert constants.hbar == pytest.approx(sc.hbar, rel=1e-8)
        assert constants.bohr_radius == pytest.approx(sc.physical_constants["Bohr radius"][0], rel=1e-8)
        assert constants.atomic_mass_unit == pytest.approx(
            sc.physical_constants["atomic mass constant"][0], rel=1e-8
        )
        assert constants.vacuum_permeability == pytest.approx(sc.mu_0, rel=1e-8)
        assert constants.bohr_magneton == pytest.approx(sc.physical_constants["Bohr magneton"][0], rel=1e-8)


class TestUnitSystem:
    """Test conversion between internal units and SI."""

    def test_scales(self):
        """Test the SI value of one internal unit of each quantity."""
        u = UnitSystem(length_unit=2.0, mass_unit=3.0, hbar=5.0)
        assert u.scale(UnitTag.LENGTH) == 2.0
        assert u.scale(UnitTag.DENSITY) == pytest.approx(1 / 8)
        assert u.scale(UnitTag.ENERGY) == pytest.approx(25 / 12)
        assert u.scale(UnitTag.WAVENUMBER) == pytest.approx(0.5)
        assert u.scale("speed") == pytest.approx(5 / 6)

    def test_unknown_tag(self):
        """Test that an unknown unit tag is a domain error."""
        u = UnitSystem(length_unit=1.0, mass_unit=1.0, hbar=1.0)
        with pytest.raises(DomainError, match="unknown unit tag"):
            u.scale("pressure")

    def test_for_scattering_length(self):
        """Test the unit system built from a scattering length in Bohr radii."""
        constants = load_constants()
        u = UnitSystem.for_scattering_length(60.0, 39.0)
        assert u.length_unit == pytest.approx(60.0 * constants.bohr_radius)
        assert u.mass_unit == pytest.approx(39.0 * constants.atomic_mass_unit)
        assert u.density_unit == pytest.approx((60.0 * constants.bohr_radius) ** -3)

    @pytest.mark.parametrize(("a_bohr", "mass_u"), [(0.0, 39.0), (-1.0, 39.0), (60.0, 0.0)])
    def test_for_scattering_length_domain(self, a_bohr: float, mass_u: float):
        """Test that non-positive inputs are rejected."""
        with pytest.raises(DomainError):
            UnitSystem.for_scattering_length(a_bohr, mass_u)

    @given(
        value=st.floats(min_value=1e-30, max_value=1e30),
        tag=st.sampled_from(list(UnitTag)),
    )
    def test_round_trip(self, value: float, tag: UnitTag):
        """Test that from_internal inverts to_internal."""
        u = UnitSystem.for_scattering_length(60.0, 162.0)
        assert from_internal(to_internal(value, tag, u), tag, u) == pytest.approx(value, rel=1e-12)


class TestDipolarLength:
    """Test the dipolar length and relative dipolar strength."""

    def test_dysprosium(self):
        """Test that Dy-162 with 9.93 Bohr magnetons has a_dd near 130 Bohr radii."""
        constants = load_constants()
        a_dd = dipolar_length(161.9267984 * constants.atomic_mass_unit, 9.93 * constants.bohr_magneton)
        assert 125.0 < a_dd / constants.bohr_radius < 135.0

    def test_epsilon_dd(self):
        """Test eps_dd = a_dd / a."""
        mass, moment = 2.7e-25, 9.2e-23
        a_dd = dipolar_length(mass, moment)
        assert epsilon_dd_from_dipole(mass, moment, 0.5 * a_dd) == pytest.approx(2.0)
        assert epsilon_dd_from_dipole(mass, 0.0, 1e-9) == 0.0

    def test_epsilon_dd_domain(self):
        """Test that a non-positive scattering length is rejected."""
        with pytest.raises(DomainError):
            epsilon_dd_from_dipole(2.7e-25, 9.2e-23, 0.0)

    def test_dipolar_length_scaling(self):
        """Test a_dd proportional to m mu^2."""
        base = dipolar_length(1e-25, 1e-23)
        assert dipolar_length(2e-25, 3e-23) == pytest.approx(18.0 * base)
        assert math.isfinite(base)

    def test_dysprosium_eps_dd_pinned(self):
        """Test eps_dd for m = 161.93 u, 9.93 Bohr magnetons, a = 60 a0 against the hand-evaluated value."""
        constants = load_constants()
        eps = epsilon_dd_from_dipole(
            161.93 * constants.atomic_mass_unit, 9.93 * constants.bohr_magneton, 60.0 * constants.bohr_radius
        )
        assert eps == pytest.approx(2.152702811044, rel=1e-12)

    @pytest.mark.parametrize(("a_bohr", "mass_u"), [(1.0, 1.0), (60.0, 161.93), (250.0, 7.0)])
    def test_eps_dd_invariant_under_unit_rescaling(self, a_bohr, mass_u):
        """Test that a_dd / a comes out the same in any internal unit system."""
        constants = load_constants()
        mass = 161.93 * constants.atomic_mass_unit
        a = 60.0 * constants.bohr_radius
        a_dd = dipolar_length(mass, 9.93 * constants.bohr_magneton)
        u = UnitSystem.for_scattering_length(a_bohr, mass_u)
        ratio = to_internal(a_dd, UnitTag.LENGTH, u) / to_internal(a, UnitTag.LENGTH, u)
        assert ratio == pytest.approx(2.152702811044, rel=1e-12)
