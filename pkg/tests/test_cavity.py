"""Dynamical models: benchmark values, agreement, and conservation laws."""

import math

import numpy as np
import pytest

from tmcavity import (
    CavityParams,
    GridMismatchError,
    InstabilityError,
    TemporalSignal,
    TimeGrid,
    analytic_conversion,
    derived_rates,
    gaussian_control,
    hermite_gaussian,
    optimal_input_mode,
    simulate_full,
    simulate_reduced,
    trajectory_to_csv,
    unconverted_energy,
)

BENCH = dict(gamma_s=10.1, gamma_c=0.01, alpha=5.5)


class TestDerivedRates:
    def test_benchmark_values_match_direct_arithmetic(self):
        par = CavityParams(**BENCH)
        rec = derived_rates(par)
        assert rec.gamma_tilde_s == pytest.approx(10.1, abs=0)
        assert rec.gamma_tilde_c == pytest.approx(0.01, abs=0)
        assert rec.f_s == pytest.approx(5.5**2 / 10.1, abs=1e-12)
        assert rec.f_s == pytest.approx(2.9950495, abs=1e-5)
        assert rec.g_s == pytest.approx(5.5 * math.sqrt(2 * 10.1 / 10.1**2), abs=1e-12)
        assert rec.g_s == pytest.approx(2.4474679, abs=1e-5)

    def test_internal_loss_halves_conversion_rate(self):
        par = CavityParams(gamma_s=4.0, gamma_c=0.0, alpha=3.0, kappa_s=4.0)
        assert par.f_s == pytest.approx(3.0**2 / 8.0, abs=1e-14)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            CavityParams(gamma_s=0.0, gamma_c=0.01, alpha=1.0)
        with pytest.raises(ValueError):
            CavityParams(gamma_s=1.0, gamma_c=-0.1, alpha=1.0)
        with pytest.raises(ValueError):
            CavityParams(gamma_s=1.0, gamma_c=0.0, alpha=1.0, kappa_s=-1.0)


class TestSimulateFull:
    def test_mismatched_gaussian_input_benchmark(self, traj_gaussian_input):
        w = unconverted_energy(traj_gaussian_input)
        assert w.value == pytest.approx(0.36, abs=0.04)
        assert np.abs(traj_gaussian_input.S.values).max() == pytest.approx(0.2, abs=0.05)
        assert np.abs(traj_gaussian_input.C.values).max() == pytest.approx(0.8, abs=0.05)

    def test_matched_input_converts_almost_fully(self, traj_optimal_input):
        w = unconverted_energy(traj_optimal_input)
        assert w.value == pytest.approx(0.016, abs=0.006)
        assert np.abs(traj_optimal_input.C.values).max() >= 0.97

    def test_no_coupling_passes_everything_through(self, grid10, control):
        par = CavityParams(gamma_s=10.1, gamma_c=0.01, alpha=0.0)
        traj = simulate_full(par, control, control)
        assert np.abs(traj.C.values).max() == 0.0
        assert unconverted_energy(traj).value == pytest.approx(1.0, abs=1e-6)

    def test_output_relations_hold_pointwise(self, traj_gaussian_input):
        traj = traj_gaussian_input
        expect_s = -traj.S_in.values + math.sqrt(2 * BENCH["gamma_s"]) * traj.S.values
        expect_c = math.sqrt(2 * BENCH["gamma_c"]) * traj.C.values
        assert np.array_equal(traj.S_out.values, expect_s)
        assert np.array_equal(traj.C_out.values, expect_c)
        assert traj.S.values[0] == 0.0 and traj.C.values[0] == 0.0

    def test_divergence_names_first_bad_sample(self):
        grid = TimeGrid(0.0, 10.0, 101)
        control = gaussian_control(3.0, grid)
        stiff = CavityParams(gamma_s=5000.0, gamma_c=0.01, alpha=5.5)
        with pytest.raises(InstabilityError, match="sample"):
            simulate_full(stiff, control, control)

    def test_drives_must_share_grid(self, control):
        other = gaussian_control(3.0, TimeGrid(0.0, 10.0, 5001))
        with pytest.raises(GridMismatchError):
            simulate_full(CavityParams(**BENCH), control, other)

    def test_explicit_grid_argument_is_checked(self, control):
        with pytest.raises(GridMismatchError):
            simulate_full(
                CavityParams(**BENCH),
                control,
                control,
                grid=TimeGrid(0.0, 10.0, 5001),
            )


class TestSimulateReduced:
    def test_matched_input_reaches_analytic_efficiency(self, control, opt_mode):
        par = CavityParams(gamma_s=10.1, gamma_c=0.0, alpha=5.5)
        traj = simulate_reduced(par, control, opt_mode)
        expected = 1.0 - math.exp(-2.0 * par.f_s)
        assert abs(traj.C.values[-1]) ** 2 == pytest.approx(expected, abs=1e-4)

    def test_orthogonal_input_stores_nothing(self, control, family8):
        par = CavityParams(gamma_s=10.1, gamma_c=0.0, alpha=5.5)
        traj = simulate_reduced(par, control, family8[1])
        assert abs(traj.C.values[-1]) ** 2 <= 1e-6

    def test_no_control_decouples_the_bands(self, grid10):
        par = CavityParams(**BENCH, kappa_s=0.3)
        zero = TemporalSignal(grid10, np.zeros(grid10.n_samples))
        s_in = hermite_gaussian(0, 5.0, grid10)
        traj = simulate_reduced(par, zero, s_in)
        assert np.all(traj.C.values == 0.0)
        expected_s = math.sqrt(2 * par.gamma_s) / par.gamma_tilde_s * s_in.values
        assert np.abs(traj.S.values - expected_s).max() < 1e-15


class TestAnalyticConversion:
    def test_matched_input_closed_form_efficiency(self):
        # continuum identity at 1e-8: needs a fine grid and generous margins
        # so neither quadrature bias nor tail clipping is visible
        par = CavityParams(gamma_s=10.1, gamma_c=0.0, alpha=5.5)
        grid = TimeGrid(-1.0, 10.0, 176001)
        control = gaussian_control(3.0, grid)
        mode = optimal_input_mode(par, control)
        _, c_end = analytic_conversion(par, control, mode)
        expected = 1.0 - math.exp(-2.0 * par.f_s)
        assert abs(c_end) ** 2 == pytest.approx(expected, abs=1e-8)

    def test_matched_input_efficiency_on_default_grid(
        self, lossless_params, control, opt_mode
    ):
        _, c_end = analytic_conversion(lossless_params, control, opt_mode)
        expected = 1.0 - math.exp(-2.0 * lossless_params.f_s)
        assert abs(c_end) ** 2 == pytest.approx(expected, abs=1e-5)

    def test_orthogonal_inputs_give_exact_null(self, lossless_params, control, family8):
        for mode in list(family8)[1:4]:
            _, c_end = analytic_conversion(lossless_params, control, mode)
            assert abs(c_end) <= 1e-8

    def test_no_coupling_no_conversion(self, control):
        par = CavityParams(gamma_s=10.1, gamma_c=0.0, alpha=0.0)
        c_sig, c_end = analytic_conversion(par, control, control)
        assert np.all(c_sig.values == 0.0) and c_end == 0.0


class TestModelAgreement:
    def test_photon_number_is_conserved_without_loss(self, traj_optimal_input):
        traj = traj_optimal_input
        from tmcavity import conservation_residual

        assert conservation_residual(traj, CavityParams(**BENCH)) < 1e-5

    def test_dynamics_are_linear_in_the_signal(self, grid10, control):
        par = CavityParams(**BENCH)
        s1 = hermite_gaussian(0, 4.0, grid10)
        s2 = hermite_gaussian(3, 5.0, grid10)
        a, b = 0.3 - 0.7j, 1.1 + 0.2j
        mix = TemporalSignal(grid10, a * s1.values + b * s2.values)
        t1 = simulate_full(par, control, s1)
        t2 = simulate_full(par, control, s2)
        tm = simulate_full(par, control, mix)
        for field in ("S", "C", "S_out", "C_out"):
            combined = a * getattr(t1, field).values + b * getattr(t2, field).values
            assert np.abs(getattr(tm, field).values - combined).max() < 1e-9

    def test_reduced_matches_closed_form_uniformly(self, control, opt_mode):
        par = CavityParams(gamma_s=10.1, gamma_c=0.0, alpha=5.5)
        traj = simulate_reduced(par, control, opt_mode)
        c_sig, _ = analytic_conversion(par, control, opt_mode)
        assert np.abs(traj.C.values - c_sig.values).max() < 1e-5

    def test_full_and_reduced_agree_on_stored_energy(
        self, bench_params, control, opt_mode, traj_optimal_input
    ):
        reduced = simulate_reduced(bench_params, control, opt_mode)
        full_c2 = abs(traj_optimal_input.C.values[-1]) ** 2
        red_c2 = abs(reduced.C.values[-1]) ** 2
        assert abs(full_c2 - red_c2) < 0.02

    def test_step_halving_leaves_results_unchanged(self):
        results = []
        for n in (10001, 20001):
            grid = TimeGrid(0.0, 10.0, n)
            control = gaussian_control(3.0, grid)
            traj = simulate_full(CavityParams(**BENCH), control, control)
            results.append(unconverted_energy(traj).value)
        assert abs(results[0] - results[1]) < 1e-6


class TestTrajectoryCsv:
    def test_schema_and_shape(self, traj_gaussian_input, tmp_path):
        path = tmp_path / "traj.csv"
        trajectory_to_csv(traj_gaussian_input, path)
        lines = path.read_text().splitlines()
        assert lines[0] == (
            "t,S_re,S_im,C_re,C_im,Sout_re,Sout_im,Cout_re,Cout_im,control_abs"
        )
        assert len(lines) == 1 + traj_gaussian_input.grid.n_samples
