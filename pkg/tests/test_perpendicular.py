"""1D eigensolver against analytic oracles, plus the electron-on-neon
observables W^G, h_e and the excitation gap."""

import math

import numpy as np
import pytest

from neontrap import (DEFAULT_CONSTANTS, DielectricStack, FieldSpec,
                      Superconductor, UnboundStateError, build_hamiltonian,
                      ground_state_energy, hellmann_feynman_check, mean_height,
                      perpendicular_gap, solve_lowest, solve_perpendicular)
from neontrap.perpendicular import Grid1D, aligned_grid, default_grid

C = DEFAULT_CONSTANTS.hbar2_over_2me
# 1D hydrogen oracle: V = -A/z with a hard wall at z = 0.
# E_n = -A^2 / (4 C n^2), psi_1 ~ z exp(-z/a) with a = 2C/A, <z> = 3a/2.
A_H = 719.982 * 0.108734
E1_H = -A_H ** 2 / (4.0 * C)
A_BOHR = 2.0 * C / A_H

SC = Superconductor()


def _solve(vfun, z_min, z_max, n, n_states):
    grid = Grid1D(z_min, z_max, n)
    diag, off = build_hamiltonian(lambda z: vfun(z), grid)
    return solve_lowest(diag, off, grid, n_states)


class TestAnalyticOracles:
    def test_particle_in_a_box(self):
        width = 10.0
        sol = _solve(lambda z: np.zeros_like(z), 0.0, width, 4000, 3)
        for n, e in enumerate(sol.energies, start=1):
            assert e == pytest.approx(n * n * math.pi ** 2 * C / width ** 2, rel=1e-4)

    def test_one_dimensional_hydrogen_ground_state(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 16384, 2)
        assert sol.energies[0] == pytest.approx(E1_H, abs=0.1)
        assert sol.energies[0] == pytest.approx(-40.22, abs=0.1)

    def test_hydrogen_series_and_gap(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 16384, 2)
        assert sol.energies[1] == pytest.approx(E1_H / 4.0, abs=0.1)
        assert perpendicular_gap(sol) == pytest.approx(-E1_H * 0.75, abs=0.1)
        assert perpendicular_gap(sol) == pytest.approx(30.16, abs=0.1)

    def test_hydrogen_mean_height(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 16384, 1)
        assert mean_height(sol) == pytest.approx(1.5 * A_BOHR, abs=0.01)
        assert mean_height(sol) == pytest.approx(1.460, abs=0.01)

    def test_harmonic_ladder(self):
        hw = 1.0  # meV
        sol = _solve(lambda z: hw * hw * z * z / (4.0 * C), -60.0, 60.0, 8192, 5)
        for n, e in enumerate(sol.energies):
            assert e == pytest.approx((n + 0.5) * hw, abs=1e-3)

    def test_harmonic_gap_is_hbar_omega(self):
        hw = 1.0
        sol = _solve(lambda z: hw * hw * z * z / (4.0 * C), -60.0, 60.0, 8192, 2)
        assert perpendicular_gap(sol) == pytest.approx(hw, abs=1e-3)

    def test_constant_shift_moves_spectrum_rigidly(self):
        base = _solve(lambda z: np.zeros_like(z), 0.0, 10.0, 2000, 3)
        shifted = _solve(lambda z: np.full_like(z, 7.5), 0.0, 10.0, 2000, 3)
        assert np.allclose(shifted.energies - base.energies, 7.5, atol=1e-8)

    def test_symmetric_box_mean_position_is_zero(self):
        sol = _solve(lambda z: np.zeros_like(z), -5.0, 5.0, 2000, 1)
        assert mean_height(sol) == pytest.approx(0.0, abs=1e-8)


class TestSolverContracts:
    def test_normalization(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 8192, 3)
        h = sol.grid.spacing
        for psi in sol.wavefunctions:
            assert np.sum(psi ** 2) * h == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 8192, 2)
        h = sol.grid.spacing
        overlap = np.sum(sol.wavefunctions[0] * sol.wavefunctions[1]) * h
        assert abs(overlap) <= 1e-8

    def test_node_counts(self):
        hw = 1.0
        sol = _solve(lambda z: hw * hw * z * z / (4.0 * C), -60.0, 60.0, 8192, 5)
        assert all(sol.converged)

    def test_energies_strictly_ascending(self):
        sol = _solve(lambda z: -A_H / z, 0.0, 80.0, 8192, 4)
        assert np.all(np.diff(sol.energies) > 0.0)

    def test_nonfinite_potential_names_offender(self):
        grid = Grid1D(0.0, 10.0, 1000)
        with pytest.raises(ValueError, match="non-finite"):
            build_hamiltonian(lambda z: np.where(z > 5.0, np.inf, 0.0), grid)

    def test_n_states_bounds(self):
        grid = Grid1D(0.0, 10.0, 1000)
        diag, off = build_hamiltonian(lambda z: np.zeros_like(z), grid)
        with pytest.raises(ValueError):
            solve_lowest(diag, off, grid, 11)

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            Grid1D(0.0, 10.0, 100)


class TestNeonConfigurations:
    def test_thin_layer_superconductor(self):
        sol = solve_perpendicular(DielectricStack(SC, 10.0), n_states=2)
        assert sol.energies[0] == pytest.approx(-44.6, abs=1.0)
        assert perpendicular_gap(sol) == pytest.approx(21.1, abs=1.0)
        assert mean_height(sol) == pytest.approx(1.7, abs=0.2)

    def test_bulk_superconductor(self):
        assert ground_state_energy(DielectricStack(SC, math.inf)) \
            == pytest.approx(-15.7, abs=0.5)

    def test_monotone_in_thickness(self):
        energies = [ground_state_energy(DielectricStack(SC, L))
                    for L in (3.0, 5.0, 10.0, 20.0, 50.0, math.inf)]
        assert all(a < b for a, b in zip(energies, energies[1:]))

    def test_grid_convergence(self):
        stack = DielectricStack(SC, 10.0)
        w1 = ground_state_energy(stack, grid=default_grid(stack, n_points=8192))
        w2 = ground_state_energy(stack, grid=default_grid(stack, n_points=16384))
        assert abs(w1 - w2) <= 0.05

    def test_barrier_penetration_length(self):
        sol = solve_perpendicular(DielectricStack(SC, 10.0), n_states=1)
        z = sol.grid.points
        dens = sol.wavefunctions[0] ** 2
        # density e-folding inside the barrier: fit log-density slope
        mask = (z < -0.05) & (z > -0.45) & (dens > 0.0)
        slope = np.polyfit(z[mask], np.log(dens[mask]), 1)[0]
        assert 0.08 <= 1.0 / slope <= 0.13

    def test_mean_height_robust_under_field(self):
        stack = DielectricStack(SC, 10.0)
        heights = [mean_height(solve_perpendicular(stack, FieldSpec(e)))
                   for e in (-1e6, 0.0, 1e6)]
        spread = (max(heights) - min(heights)) / heights[1]
        assert spread <= 0.20

    def test_strong_negative_field_flagged_unbound(self):
        with pytest.raises(UnboundStateError):
            ground_state_energy(DielectricStack(SC, 10.0), FieldSpec(-5e6))

    def test_ground_state_between_minimum_and_zero(self):
        stack = DielectricStack(SC, 10.0)
        sol = solve_perpendicular(stack, n_states=1)
        from neontrap import perpendicular_potential
        v_min = perpendicular_potential(stack, DEFAULT_CONSTANTS.cutoff_zc)
        assert v_min < sol.energies[0] < 0.0


class TestHellmannFeynman:
    def test_residual_small(self):
        res = hellmann_feynman_check(DielectricStack(SC, 10.0), FieldSpec(0.0), 1e4)
        assert res <= 1e-3

    def test_residual_small_at_finite_field(self):
        res = hellmann_feynman_check(DielectricStack(SC, 10.0), FieldSpec(5e5), 1e4)
        assert res <= 1e-3

    def test_unbound_endpoint_flagged(self):
        with pytest.raises(UnboundStateError):
            hellmann_feynman_check(DielectricStack(SC, 10.0), FieldSpec(-4.9e6), 2e5)


class TestAlignedGrid:
    def test_surface_node_present(self):
        g = aligned_grid(-2.0, 40.0, 8192)
        assert np.min(np.abs(g.points)) < 1e-12

    def test_bounds_preserved(self):
        g = aligned_grid(-2.0, 40.0, 8192)
        assert g.z_max == 40.0
        assert g.z_min == pytest.approx(-2.0, abs=0.01)
