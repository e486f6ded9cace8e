"""Tests for the self-consistent correlation table of the binary mixture."""

import numpy as np
import pytest
from pydantic import ValidationError

from droplet_dft.errors import DomainError, IterationLimitError
from droplet_dft.mixture import (
    GridAxis,
    GridSpec,
    SelfConsistentSolver,
    SolverOptions,
    chi_dilute,
    equilibrium_density,
    frozen_curvature,
    solve_self_consistent,
    sound_speeds,
)
from droplet_dft.models import DensityPair, MixtureParams


@pytest.fixture
def dilute_grid() -> GridSpec:
    """Low-density grid where the fixed point stays close to the dilute limit."""
    axis = GridAxis(lo=1e-9, hi=1e-8, points=101)
    return GridSpec(axis1=axis, axis2=axis)


class TestGrid:
    """Test grid models and the local curvature stencil."""

    def test_axis_validation(self):
        """Test minimum point count and increasing bounds."""
        with pytest.raises(ValidationError):
            GridAxis(lo=1.0, hi=2.0, points=32)
        with pytest.raises(ValidationError, match="strictly increasing"):
            GridAxis(lo=2.0, hi=1.0)

    def test_around_equilibrium(self, droplet_mixture: MixtureParams):
        """Test that the default grid brackets the per-component equilibrium density."""
        grid = GridSpec.around_equilibrium(droplet_mixture, points=51)
        half = 0.5 * equilibrium_density(1.0, -1.05)
        values = grid.axis1.values()
        assert values[0] < half < values[-1]
        assert len(values) == 51

    def test_curvature_matches_analytic_dilute_chi(self):
        """Test the stencil against the analytic chi where the soft branch vanishes (a12 = -a11)."""
        p = MixtureParams.from_scattering_lengths(1.0, 1.0, -1.0)
        n = DensityPair(n1=2e-6, n2=5e-6)
        f11, f12, f22 = frozen_curvature(np.array(n.n1), np.array(n.n2), p.g11, p.g22, p.g12)
        expected = chi_dilute(n, p)
        assert float(f11) == pytest.approx(expected.chi11, rel=1e-4)
        assert float(f12) == pytest.approx(expected.chi12, rel=1e-4)
        assert float(f22) == pytest.approx(expected.chi22, rel=1e-4)

    def test_curvature_is_symmetric_under_component_swap(self, miscible_mixture: MixtureParams):
        """Test that swapping the densities swaps chi11 and chi22."""
        p = miscible_mixture
        f11, f12, f22 = frozen_curvature(np.array(1e-6), np.array(3e-6), p.g11, p.g22, p.g12)
        s11, s12, s22 = frozen_curvature(np.array(3e-6), np.array(1e-6), p.g11, p.g22, p.g12)
        assert float(f11) == pytest.approx(float(s22), rel=1e-8)
        assert float(f12) == pytest.approx(float(s12), rel=1e-8)
        assert float(f22) == pytest.approx(float(s11), rel=1e-8)


class TestSelfConsistentSolver:
    """Test the damped fixed-point iteration."""

    def test_dilute_limit_matches_bare_curvature(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test converged chi against the bare-coupling chi at the lowest grid densities."""
        table = solve_self_consistent(miscible_mixture, dilute_grid)
        assert table.converged
        assert table.residual < 1e-8
        assert table.soft_mode_real

        p = miscible_mixture
        for i, j in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            bare = frozen_curvature(table.grid1[i], table.grid2[j], p.g11, p.g22, p.g12)
            chi = table.chi_at(i, j)
            assert chi.chi11 == pytest.approx(float(bare[0]), rel=1e-2)
            assert chi.chi22 == pytest.approx(float(bare[2]), rel=1e-2)
            assert abs(chi.chi12 - float(bare[1])) < 1e-2 * abs(float(bare[0]))

    def test_dilute_limit_matches_analytic_chi(self, dilute_grid: GridSpec):
        """Test converged chi against the analytic dilute chi on the a12 = -a11 line."""
        p = MixtureParams.from_scattering_lengths(1.0, 1.0, -1.0)
        table = solve_self_consistent(p, dilute_grid)
        assert table.converged

        for i, j in [(0, 0), (0, 2), (2, 0), (2, 2)]:
            expected = chi_dilute(DensityPair(n1=float(table.grid1[i]), n2=float(table.grid2[j])), p)
            chi = table.chi_at(i, j)
            assert chi.chi11 == pytest.approx(expected.chi11, rel=1e-2)
            assert chi.chi22 == pytest.approx(expected.chi22, rel=1e-2)
            assert abs(chi.chi12 - expected.chi12) < 1e-2 * abs(expected.chi11)

    def test_grid_refinement(self, droplet_mixture: MixtureParams):
        """Test that doubling the grid resolution leaves E_C at shared nodes unchanged."""
        coarse = solve_self_consistent(droplet_mixture, GridSpec.around_equilibrium(droplet_mixture, points=51))
        fine = solve_self_consistent(droplet_mixture, GridSpec.around_equilibrium(droplet_mixture, points=101))
        np.testing.assert_allclose(fine.grid1[::2], coarse.grid1, rtol=1e-12)
        np.testing.assert_allclose(fine.ec[::2, ::2][1:-1, 1:-1], coarse.ec[1:-1, 1:-1], rtol=1e-3)

    def test_residual_decreases(self, droplet_mixture: MixtureParams):
        """Test that the residual falls monotonically and E_C stays non-negative."""
        table = solve_self_consistent(droplet_mixture, GridSpec.around_equilibrium(droplet_mixture, points=51))
        assert table.residual_monotone
        assert table.residual_history[-1] < table.residual_history[0]
        assert (table.ec >= 0).all()

    def test_non_finite_residual_stops_iteration(
        self, miscible_mixture: MixtureParams, dilute_grid: GridSpec, monkeypatch: pytest.MonkeyPatch
    ):
        """Test that a NaN update aborts on the sweep that produced it."""
        solver = SelfConsistentSolver(miscible_mixture, dilute_grid)
        nan = np.full_like(solver.n1, np.nan)
        monkeypatch.setattr(solver, "curvature", lambda chi: (nan, nan, nan))

        with pytest.raises(IterationLimitError, match="diverged") as exc_info:
            solver.solve()
        assert len(exc_info.value.residual_history) == 1

    def test_droplet_regime_soft_mode_is_real_at_equilibrium(self, droplet_mixture: MixtureParams):
        """Test that self-consistency makes the soft phonon speed real at the equilibrium density."""
        table = solve_self_consistent(droplet_mixture)
        assert table.converged

        half = 0.5 * equilibrium_density(1.0, -1.05)
        bare = sound_speeds(DensityPair(n1=half, n2=half), droplet_mixture)
        assert bare.c_soft_squared < 0

        i, j = table.nearest_index(half, half)
        assert table.speeds_at(i, j).c_soft_squared >= 0

    def test_max_iter_zero_evaluates_only(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test that max_iter = 0 returns the bare table without iterating."""
        table = solve_self_consistent(miscible_mixture, dilute_grid, SolverOptions(max_iter=0))
        assert not table.converged
        assert table.iterations == 0
        assert table.residual_history == []
        assert table.ec.shape == (101, 101)

    def test_iteration_limit(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test that hitting max_iter raises with the residual history."""
        options = SolverOptions(max_iter=2, tol=1e-300)
        with pytest.raises(IterationLimitError) as exc_info:
            SelfConsistentSolver(miscible_mixture, dilute_grid, options).solve()
        assert len(exc_info.value.residual_history) == 2
        assert exc_info.value.residual == exc_info.value.residual_history[-1]

    def test_damping_does_not_change_fixed_point(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test that different damping factors converge to the same chi."""
        fast = solve_self_consistent(miscible_mixture, dilute_grid, SolverOptions(damping=1.0, tol=1e-12))
        slow = solve_self_consistent(miscible_mixture, dilute_grid, SolverOptions(damping=0.3, tol=1e-12))
        np.testing.assert_allclose(fast.chi11, slow.chi11, rtol=1e-7)
        assert slow.iterations > fast.iterations


class TestCorrelationTable:
    """Test interpolation and the symmetric functional."""

    def test_interpolate_at_nodes(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test that spline interpolation reproduces grid values at nodes."""
        table = solve_self_consistent(miscible_mixture, dilute_grid)
        ec, chi = table.interpolate(float(table.grid1[10]), float(table.grid2[20]))
        assert ec == pytest.approx(table.ec[10, 20], rel=1e-10)
        assert chi.chi11 == pytest.approx(table.chi11[10, 20], rel=1e-8)

    def test_interpolate_outside(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test that points outside the grid are rejected."""
        table = solve_self_consistent(miscible_mixture, dilute_grid)
        with pytest.raises(DomainError):
            table.interpolate(1.0, 1e-9)

    def test_symmetric_functional(self, miscible_mixture: MixtureParams, dilute_grid: GridSpec):
        """Test E_C(n/2, n/2) and its derivative along the diagonal."""
        table = solve_self_consistent(miscible_mixture, dilute_grid)
        functional = table.symmetric_functional()
        n = 2.0 * table.grid1[50]
        assert functional.energy_density(np.array([n]))[0] == pytest.approx(table.ec[50, 50], rel=1e-10)

        h = 1e-4 * n
        numeric = (functional.energy_density(np.array([n + h])) - functional.energy_density(np.array([n - h]))) / (
            2 * h
        )
        assert functional.potential(np.array([n]))[0] == pytest.approx(numeric[0], rel=1e-5)
