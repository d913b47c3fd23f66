import numpy as np
import pytest

from tvarx.config import RunConfig
from tvarx.exceptions import UnstableTrajectoryError
from tvarx.model import ModelOrders
from tvarx.simulate import (
    ArxTrajectory,
    butterworth_lowpass,
    companion_spectral_radius,
    default_bank,
    design_default_bank,
    generate_bank,
    generate_dataset,
    generate_stable_polynomial,
    load_dataset,
    lowpass_filtered_noise,
    PolynomialBank,
    polynomial_from_roots,
    raised_cosine_ramp,
    save_dataset,
    schedule_trajectory,
    simulate_arx,
    sos_frequency_response,
    stream_rng,
)


class TestStablePolynomials:
    def test_single_real_root(self):
        np.testing.assert_allclose(polynomial_from_roots([0.5]), [1.0, -0.5], rtol=1e-15)

    def test_conjugate_pair_expansion(self):
        rho, ang = 0.6, np.pi / 4
        coeffs = polynomial_from_roots([rho * np.exp(1j * ang), rho * np.exp(-1j * ang)])
        np.testing.assert_allclose(coeffs, [1.0, -0.6 * np.sqrt(2.0), 0.36], rtol=1e-14)

    @pytest.mark.parametrize("degree", [1, 2, 3, 5])
    def test_generated_polynomials_are_stable(self, degree, rng):
        for _ in range(30):
            coeffs = generate_stable_polynomial(degree, 0.9, rng, min_root_modulus=0.3)
            assert coeffs[0] == 1.0 and len(coeffs) == degree + 1
            assert np.isrealobj(coeffs)
            assert np.max(np.abs(np.roots(coeffs))) < 0.9 + 1e-9

    def test_domain_checks(self, rng):
        with pytest.raises(ValueError):
            generate_stable_polynomial(0, 0.9, rng)
        with pytest.raises(ValueError):
            generate_stable_polynomial(2, 1.1, rng)

    def test_spectral_radius_batched(self, rng):
        polys = np.stack([generate_stable_polynomial(2, 0.9, rng) for _ in range(20)])
        radii = companion_spectral_radius(polys)
        singles = [companion_spectral_radius(row) for row in polys]
        np.testing.assert_allclose(radii, singles, rtol=1e-12)


class TestBank:
    def test_unstable_bank_rejected(self):
        # z^2 - 2 z + 0.9 has a root at 1.316
        with pytest.raises(ValueError):
            PolynomialBank(a_polys=[[1.0, -2.0, 0.9]], b_polys=[[1.0, 0.0]])

    def test_generate_bank_counts(self, rng):
        bank = generate_bank(rng)
        assert bank.a_polys.shape == (9, 3)
        assert bank.b_polys.shape == (2, 2)
        assert bank.orders == ModelOrders(2, 2)

    def test_default_bank_matches_designed_construction(self):
        shipped = default_bank()
        designed = design_default_bank()
        np.testing.assert_array_equal(shipped.a_polys, designed.a_polys)
        np.testing.assert_array_equal(shipped.b_polys, designed.b_polys)


class TestTrajectory:
    def test_endpoints_interpolate_bank(self, rng):
        bank = generate_bank(rng)
        traj = schedule_trajectory(bank, 160)
        np.testing.assert_allclose(traj.a_coeffs()[0], bank.a_polys[0], rtol=1e-15)
        np.testing.assert_allclose(traj.a_coeffs()[-1], bank.a_polys[-1], rtol=1e-15)
        np.testing.assert_allclose(traj.b_coeffs()[0], bank.b_polys[0], rtol=1e-15)
        np.testing.assert_allclose(traj.b_coeffs()[-1], bank.b_polys[-1], rtol=1e-15)

    def test_segment_midpoint_is_even_blend(self, rng):
        # N = 72 gives segments of length 9 whose middle sample sits exactly
        # halfway up the ramp
        bank = generate_bank(rng)
        traj = schedule_trajectory(bank, 72)
        seg = 2  # third segment: samples 19 .. 27 (1-based), midpoint t = 23
        mid_idx = seg * 9 + 4
        expected = 0.5 * (bank.a_polys[seg] + bank.a_polys[seg + 1])
        np.testing.assert_allclose(traj.a_coeffs()[mid_idx], expected, rtol=1e-12)

    def test_every_step_stable(self, rng):
        for _ in range(5):
            traj = schedule_trajectory(generate_bank(rng), 160)
            radii = companion_spectral_radius(traj.a_coeffs())
            assert np.all(radii < 1.0)

    def test_bank_too_small_rejected(self, rng):
        bank = generate_bank(rng, n_a=5)
        with pytest.raises(ValueError):
            schedule_trajectory(bank, 160)

    def test_unstable_blend_detected(self):
        # the degree-2 stability region is convex, so blends of second-order
        # polynomials never escape; at degree 3 they can: the average of
        # (z - 0.9)^3 and (z + 0.9)^3 has roots at +-1.56i
        a1 = polynomial_from_roots([0.9, 0.9, 0.9])
        a2 = polynomial_from_roots([-0.9, -0.9, -0.9])
        bank = PolynomialBank(a_polys=[a1] * 5 + [a2] * 4, b_polys=[[1.0], [0.5]])
        with pytest.raises(UnstableTrajectoryError):
            schedule_trajectory(bank, 160)

    def test_ramp_boundaries(self):
        ramp = raised_cosine_ramp(9)
        assert ramp[0] == 0.0 and ramp[-1] == 1.0
        assert ramp[4] == pytest.approx(0.5)
        assert np.all(np.diff(ramp) > 0)


class TestButterworth:
    def test_unit_dc_gain(self):
        sos = butterworth_lowpass(10, 0.4)
        np.testing.assert_allclose(sos_frequency_response(sos, [0.0]), [1.0], atol=1e-9)

    def test_half_power_at_cutoff_measured_on_sinusoid(self):
        # drive the filter with a unit sinusoid at the cutoff and measure the
        # steady-state output amplitude
        import scipy.signal

        cutoff = 0.2
        sos = butterworth_lowpass(10, cutoff)
        t = np.arange(6000)
        x = np.sin(np.pi * cutoff * t)
        out = scipy.signal.sosfilt(sos, x)[3000:]
        ratio = out.max() / 1.0
        assert ratio == pytest.approx(1.0 / np.sqrt(2.0), rel=0.01)

    def test_strong_attenuation_an_octave_above_cutoff(self):
        for cutoff in (0.1, 0.2, 0.4):
            sos = butterworth_lowpass(10, cutoff)
            mag = sos_frequency_response(sos, [2.0 * cutoff])[0]
            assert -20.0 * np.log10(mag) >= 60.0

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            butterworth_lowpass(9, 0.2)
        with pytest.raises(ValueError):
            butterworth_lowpass(10, 1.5)

    def test_filtered_noise_is_stationary(self):
        x = lowpass_filtered_noise(10_000, 10, 0.4, np.random.default_rng(5))
        v1 = x[:5000].var()
        v2 = x[5000:].var()
        assert abs(v1 - v2) / max(v1, v2) < 0.2


class TestSimulateArx:
    def test_pure_delay(self, rng):
        # no output lags, unit gain on u(t-1): the output is the shifted input
        orders = ModelOrders(2, 2)
        theta = np.tile([0.0, 0.0, 1.0, 0.0], (50, 1))
        traj = ArxTrajectory(theta=theta, orders=orders)
        u = rng.standard_normal(50)
        y = simulate_arx(traj, u, 0.0, rng)
        np.testing.assert_allclose(y[2:], u[1:-1], rtol=1e-15)

    def test_deterministic_given_rng_state(self, rng):
        traj = schedule_trajectory(generate_bank(rng), 160)
        u = rng.standard_normal(160)
        y1 = simulate_arx(traj, u, 0.01, np.random.default_rng(3), init_rng=np.random.default_rng(4))
        y2 = simulate_arx(traj, u, 0.01, np.random.default_rng(3), init_rng=np.random.default_rng(4))
        np.testing.assert_array_equal(y1, y2)

    def test_noise_variance_matches_request(self, rng):
        # feedback-free system so the output noise is exactly the injected noise
        N = 10_002
        orders = ModelOrders(2, 2)
        theta = np.tile([0.0, 0.0, 1.0, 0.5], (N, 1))
        traj = ArxTrajectory(theta=theta, orders=orders)
        u = rng.standard_normal(N)
        noisy = simulate_arx(traj, u, 0.01, np.random.default_rng(11), init_rng=np.random.default_rng(12))
        clean = simulate_arx(traj, u, 0.0, np.random.default_rng(11), init_rng=np.random.default_rng(12))
        v = np.var(noisy[2:] - clean[2:])
        assert 0.0094 <= v <= 0.0106


class TestGenerateDataset:
    def test_same_seed_bit_identical(self):
        cfg = RunConfig()
        a = generate_dataset(cfg, 42)
        b = generate_dataset(cfg, 42)
        np.testing.assert_array_equal(a.u, b.u)
        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.trajectory.theta, b.trajectory.theta)

    def test_default_protocol_sizes(self):
        ds = generate_dataset(RunConfig(), 42)
        assert ds.N == 160
        assert ds.orders.p == 4
        assert ds.trajectory.theta.shape == (160, 4)

    def test_different_seeds_share_default_bank(self):
        cfg = RunConfig()
        a = generate_dataset(cfg, 1)
        b = generate_dataset(cfg, 2)
        assert not np.array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.trajectory.theta, b.trajectory.theta)

    def test_regenerated_bank_differs_per_seed(self):
        cfg = RunConfig(bank="regenerate")
        a = generate_dataset(cfg, 1)
        b = generate_dataset(cfg, 2)
        assert not np.array_equal(a.trajectory.theta, b.trajectory.theta)

    def test_named_streams_are_independent(self):
        r1 = stream_rng(7, "input-noise").standard_normal(8)
        r2 = stream_rng(7, "output-noise").standard_normal(8)
        r3 = stream_rng(7, "input-noise").standard_normal(8)
        assert not np.array_equal(r1, r2)
        np.testing.assert_array_equal(r1, r3)


class TestDatasetFile:
    def test_round_trip_bit_exact(self, tmp_path):
        ds = generate_dataset(RunConfig(), 123)
        path = tmp_path / "data.txt"
        save_dataset(ds, path)
        back = load_dataset(path)
        np.testing.assert_array_equal(back.u, ds.u)
        np.testing.assert_array_equal(back.y, ds.y)
        np.testing.assert_array_equal(back.trajectory.theta, ds.trajectory.theta)
        assert back.sigma2 == ds.sigma2
        assert back.seed == ds.seed
        assert back.filter_cutoff == ds.filter_cutoff
        assert back.orders == ds.orders

    def test_missing_truth_columns_tolerated(self, tmp_path):
        ds = generate_dataset(RunConfig(), 123)
        stripped = type(ds)(u=ds.u, y=ds.y, orders=ds.orders, trajectory=None,
                            sigma2=ds.sigma2, seed=ds.seed, filter_cutoff=ds.filter_cutoff)
        path = tmp_path / "data.txt"
        save_dataset(stripped, path)
        back = load_dataset(path)
        assert back.trajectory is None
        np.testing.assert_array_equal(back.y, ds.y)

    def test_garbage_file_rejected(self, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("not a dataset\n")
        with pytest.raises(ValueError):
            load_dataset(path)
