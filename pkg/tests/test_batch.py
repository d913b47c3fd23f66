import numpy as np
import pytest

from conftest import random_pd_matrix, random_stream
from tvarx.batch import (
    batch_regularized_ls,
    batch_weighted_ls,
    exponential_weights,
    optimality_residual,
)
from tvarx.exceptions import RankDeficiencyError


class TestBatchWeightedLs:
    def test_square_system_interpolates(self, rng):
        y = rng.standard_normal(4)
        theta = batch_weighted_ls(np.eye(4), y, 0.7)
        np.testing.assert_allclose(theta, y, rtol=1e-12)

    def test_unit_factor_is_ordinary_least_squares(self, rng):
        Phi, y = random_stream(rng, 3, 40)
        theta = batch_weighted_ls(Phi, y, 1.0)
        ref, *_ = np.linalg.lstsq(Phi, y, rcond=None)
        np.testing.assert_allclose(theta, ref, rtol=1e-9)

    def test_weights_decay_geometrically(self):
        np.testing.assert_allclose(exponential_weights(4, 0.5), [1.0, 0.5, 0.25, 0.125])

    def test_newest_row_weighs_most(self, rng):
        # duplicate regressor with conflicting observations: the weighted
        # solution must sit closer to the newest one
        Phi = np.ones((2, 1))
        theta = batch_weighted_ls(Phi, np.array([1.0, 0.0]), 0.25)
        np.testing.assert_allclose(theta, [0.8], rtol=1e-12)  # (1 + 0.25*0)/(1.25)

    def test_rank_deficiency_detected(self):
        Phi = np.ones((5, 2))  # identical columns
        with pytest.raises(RankDeficiencyError):
            batch_weighted_ls(Phi, np.ones(5), 0.9)

    def test_misaligned_shapes_rejected(self, rng):
        with pytest.raises(ValueError):
            batch_weighted_ls(np.ones((4, 2)), np.ones(3), 0.9)


class TestBatchRegularizedLs:
    def test_zero_innovation_returns_previous(self, rng):
        theta_prev = rng.standard_normal(3)
        phi = rng.standard_normal(3)
        W = random_pd_matrix(rng, 3)
        out = batch_regularized_ls(phi, float(phi @ theta_prev), theta_prev, W)
        np.testing.assert_allclose(out, theta_prev, rtol=1e-12)

    def test_huge_penalty_pins_previous(self, rng):
        theta_prev = rng.standard_normal(3)
        out = batch_regularized_ls(rng.standard_normal(3), 5.0, theta_prev, 1e8 * np.eye(3))
        assert np.linalg.norm(out - theta_prev) < 1e-4

    def test_scalar_closed_form(self):
        out = batch_regularized_ls(np.array([1.0]), 2.0, np.array([0.0]), np.array([[1.0]]))
        np.testing.assert_allclose(out, [1.0], rtol=1e-15)

    def test_first_order_condition(self, rng):
        for _ in range(50):
            p = int(rng.integers(1, 7))
            phi = rng.standard_normal(p)
            y = float(rng.standard_normal())
            theta_prev = rng.standard_normal(p)
            W = random_pd_matrix(rng, p)
            out = batch_regularized_ls(phi, y, theta_prev, W)
            lhs = (np.outer(phi, phi) + W) @ out
            rhs = phi * y + W @ theta_prev
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12)


class TestOptimalityResidual:
    def test_zero_at_weighted_optimum(self, rng):
        Phi, y = random_stream(rng, 3, 30)
        lam = 0.85
        theta = batch_weighted_ls(Phi, y, lam)
        w = exponential_weights(30, lam)
        scale = np.linalg.norm(Phi.T @ (w * y))
        assert optimality_residual(Phi, y, lam, theta) < 1e-9 * scale

    def test_grows_away_from_optimum(self, rng):
        Phi, y = random_stream(rng, 3, 30)
        lam = 0.85
        theta = batch_weighted_ls(Phi, y, lam)
        at_opt = optimality_residual(Phi, y, lam, theta)
        bumped = theta.copy()
        bumped[1] += 1e-2
        assert optimality_residual(Phi, y, lam, bumped) > at_opt
