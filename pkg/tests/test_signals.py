"""Grid, signal container, and quadrature contracts."""

import math

import numpy as np
import pytest

from tmcavity import (
    DegenerateSignalError,
    GridMismatchError,
    TemporalSignal,
    TimeGrid,
    cumulative_integral,
    hermite_gaussian,
    inner_product,
    normalize,
    signal_from_csv,
    signal_to_csv,
)


def rand_signal(grid, rng):
    vals = rng.normal(size=grid.n_samples) + 1j * rng.normal(size=grid.n_samples)
    return TemporalSignal(grid, vals)


class TestTimeGrid:
    def test_dt_and_sample_positions_are_exact(self):
        grid = TimeGrid(0.0, 10.0, 10001)
        assert grid.dt == pytest.approx(1e-3, abs=0)
        t = grid.times
        # sample k must be t_start + k*dt with no accumulated drift
        k = np.arange(grid.n_samples)
        assert np.array_equal(t, 0.0 + k * grid.dt)
        assert t[0] == 0.0 and t[-1] == 10.0

    def test_rejects_degenerate_windows(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 10.0, 1)
        with pytest.raises(ValueError):
            TimeGrid(5.0, 5.0, 100)
        with pytest.raises(ValueError):
            TimeGrid(5.0, 1.0, 100)


class TestTemporalSignal:
    def test_length_must_match_grid(self):
        grid = TimeGrid(0.0, 1.0, 11)
        with pytest.raises(ValueError):
            TemporalSignal(grid, np.zeros(10))

    def test_rejects_non_finite_values(self):
        grid = TimeGrid(0.0, 1.0, 11)
        vals = np.zeros(11, dtype=complex)
        vals[3] = np.nan
        with pytest.raises(ValueError, match="index 3"):
            TemporalSignal(grid, vals)

    def test_values_are_frozen_copies(self):
        grid = TimeGrid(0.0, 1.0, 11)
        src = np.ones(11, dtype=complex)
        sig = TemporalSignal(grid, src)
        src[0] = 5.0
        assert sig.values[0] == 1.0
        with pytest.raises(ValueError):
            sig.values[0] = 2.0

    def test_arithmetic_requires_common_grid(self):
        a = TemporalSignal(TimeGrid(0.0, 1.0, 11), np.ones(11))
        b = TemporalSignal(TimeGrid(0.0, 2.0, 11), np.ones(11))
        with pytest.raises(GridMismatchError):
            a + b


class TestInnerProduct:
    def test_ground_mode_self_overlap_matches_quadrature_oracle(self):
        grid = TimeGrid(-8.0, 8.0, 4001)
        # independent oracle: trapezoid of the analytic envelope directly
        t = grid.times
        envelope = np.exp(-0.5 * t**2) / np.pi**0.25
        density = envelope**2
        oracle = grid.dt * (density.sum() - 0.5 * (density[0] + density[-1]))
        assert oracle == pytest.approx(1.0, abs=1e-8)
        hg0 = hermite_gaussian(0, 0.0, grid)
        assert inner_product(hg0, hg0).real == pytest.approx(1.0, abs=1e-8)
        assert inner_product(hg0, hg0).imag == pytest.approx(0.0, abs=1e-15)

    def test_odd_even_modes_are_orthogonal(self):
        grid = TimeGrid(-8.0, 8.0, 4001)
        hg0 = hermite_gaussian(0, 0.0, grid)
        hg1 = hermite_gaussian(1, 0.0, grid)
        assert abs(inner_product(hg0, hg1)) < 1e-10

    def test_matched_storage_mode_is_unit_norm(self, opt_mode):
        assert inner_product(opt_mode, opt_mode).real == pytest.approx(1.0, abs=1e-6)

    def test_mismatched_grids_rejected(self):
        a = TemporalSignal(TimeGrid(0.0, 1.0, 11), np.ones(11))
        b = TemporalSignal(TimeGrid(0.0, 1.0, 21), np.ones(21))
        with pytest.raises(GridMismatchError):
            inner_product(a, b)

    def test_conjugate_symmetry_and_linearity(self):
        rng = np.random.default_rng(7)
        grid = TimeGrid(0.0, 1.0, 301)
        a, b, c = (rand_signal(grid, rng) for _ in range(3))
        assert inner_product(a, b) == pytest.approx(
            np.conj(inner_product(b, a)), abs=1e-12
        )
        # linear in the second slot, conjugate-linear in the first
        lam = 0.8 - 1.7j
        lhs = inner_product(a, TemporalSignal(grid, lam * b.values + c.values))
        rhs = lam * inner_product(a, b) + inner_product(a, c)
        assert lhs == pytest.approx(rhs, rel=1e-12)
        lhs = inner_product(TemporalSignal(grid, lam * a.values), b)
        assert lhs == pytest.approx(np.conj(lam) * inner_product(a, b), rel=1e-12)


class TestCumulativeIntegral:
    def test_unit_control_pulse_area_reaches_one(self, control):
        area = cumulative_integral(control)
        assert area.values[0] == 0.0
        assert area.values[-1].real == pytest.approx(1.0, abs=1e-8)
        assert np.all(np.diff(area.values.real) >= 0.0)

    def test_zero_signal_integrates_to_zero(self):
        grid = TimeGrid(0.0, 1.0, 101)
        out = cumulative_integral(TemporalSignal(grid, np.zeros(101)))
        assert np.all(out.values == 0.0)

    def test_constant_magnitude_on_unit_window(self):
        grid = TimeGrid(0.0, 2.0, 2001)
        out = cumulative_integral(TemporalSignal(grid, np.ones(2001)))
        assert out.values[-1].real == pytest.approx(2.0, abs=1e-12)

    def test_final_sample_equals_signal_energy(self):
        rng = np.random.default_rng(11)
        grid = TimeGrid(0.0, 3.0, 501)
        for _ in range(5):
            f = rand_signal(grid, rng)
            area = cumulative_integral(f).values[-1].real
            assert area == pytest.approx(inner_product(f, f).real, abs=1e-12)

    def test_custom_map(self):
        grid = TimeGrid(0.0, 1.0, 101)
        f = TemporalSignal(grid, np.full(101, 2.0))
        out = cumulative_integral(f, integrand_map=lambda v: v.real)
        assert out.values[-1].real == pytest.approx(2.0, abs=1e-12)


class TestNormalize:
    def test_rescales_by_real_positive_factor(self):
        grid = TimeGrid(-8.0, 8.0, 2001)
        hg0 = hermite_gaussian(0, 0.0, grid)
        doubled = TemporalSignal(grid, 2.0 * hg0.values)
        back = normalize(doubled)
        assert np.abs(back.values - hg0.values).max() < 1e-12

    def test_unit_norm_input_is_unchanged(self):
        grid = TimeGrid(-8.0, 8.0, 2001)
        hg0 = hermite_gaussian(0, 0.0, grid)
        assert np.abs(normalize(hg0).values - hg0.values).max() < 1e-12

    def test_two_mode_superposition(self):
        grid = TimeGrid(-8.0, 8.0, 2001)
        hg0 = hermite_gaussian(0, 0.0, grid)
        hg1 = hermite_gaussian(1, 0.0, grid)
        mix = hg0 + hg1
        # orthonormal parts: quadrature norm of the sum is sqrt(2)
        assert inner_product(mix, mix).real == pytest.approx(2.0, abs=1e-9)
        out = normalize(mix)
        assert inner_product(out, out).real == pytest.approx(1.0, abs=1e-12)

    def test_zero_signal_is_degenerate(self):
        grid = TimeGrid(0.0, 1.0, 11)
        with pytest.raises(DegenerateSignalError):
            normalize(TemporalSignal(grid, np.zeros(11)))


class TestQuadratureConvergence:
    def test_second_order_on_clipped_gaussian(self):
        # half-Gaussian on [0, 2]: endpoint slopes dominate the error, so
        # halving dt must cut the defect by ~4 (at least 3.9)
        exact = math.sqrt(math.pi) / 2.0 * math.erf(2.0)
        errors = []
        for n in (51, 101, 201):
            grid = TimeGrid(0.0, 2.0, n)
            f = TemporalSignal(grid, np.exp(-grid.times**2))
            approx = cumulative_integral(f, integrand_map=lambda v: v.real)
            errors.append(abs(approx.values[-1].real - exact))
        assert errors[0] / errors[1] >= 3.9
        assert errors[1] / errors[2] >= 3.9


class TestCsvRoundTrip:
    def test_full_precision_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        grid = TimeGrid(0.25, 4.75, 301)
        sig = rand_signal(grid, rng)
        path = tmp_path / "sig.csv"
        signal_to_csv(sig, path)
        back = signal_from_csv(path)
        assert back.grid == sig.grid
        assert np.array_equal(back.values, sig.values)

    def test_header_schema(self, tmp_path):
        grid = TimeGrid(0.0, 1.0, 11)
        path = tmp_path / "sig.csv"
        signal_to_csv(TemporalSignal(grid, np.ones(11)), path)
        assert path.read_text().splitlines()[0] == "t,re,im"

    def test_missing_header_is_rejected(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("0.0,1.0,0.0\n1.0,1.0,0.0\n")
        with pytest.raises(ValueError, match="header"):
            signal_from_csv(path)
