import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


def random_pd_matrix(rng, p, jitter=0.1):
    """Well-conditioned random symmetric positive definite matrix."""
    G = rng.standard_normal((p, p))
    return G @ G.T + jitter * p * np.eye(p)


def random_stream(rng, p, T, noise=0.1):
    """Random regressors and outputs from a fixed linear model plus noise."""
    Phi = rng.standard_normal((T, p))
    theta = rng.standard_normal(p)
    y = Phi @ theta + noise * rng.standard_normal(T)
    return Phi, y
