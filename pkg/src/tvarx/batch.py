"""Batch least-squares solvers used as independent cross-checks.

These deliberately take a different algorithmic route than the recursions:
they form the full weighted normal equations and solve them with a dense
symmetric factorization, so agreement between the two paths is evidence
rather than tautology.

Row convention: the regression matrix carries the newest sample in row 0, so
row k receives weight lambda**k.
"""

import numpy as np
import scipy.linalg

from .exceptions import RankDeficiencyError
from ._validation import check_forgetting_factor

#: Reciprocal-condition threshold for declaring the normal equations rank-deficient.
_RANK_RCOND = 1e-13


def exponential_weights(T, lam):
    """Weights [1, lam, lam^2, ...] for newest-first rows."""
    return np.asarray(lam, dtype=float) ** np.arange(T)


def batch_weighted_ls(Phi, y, lam):
    """Minimize sum_k lambda^k (y_k - phi_k^T theta)^2 over theta.

    Parameters
    ----------
    Phi : ndarray (T, p)
        Regressor rows, newest first.
    y : ndarray (T,)
        Matching observations.
    lam : float in (0, 1]

    Returns
    -------
    ndarray (p,)
    """
    Phi = np.asarray(Phi, dtype=float)
    y = np.asarray(y, dtype=float)
    lam = check_forgetting_factor(lam)
    if Phi.ndim != 2 or Phi.shape[0] != y.shape[0]:
        raise ValueError(f"Phi {Phi.shape} and y {y.shape} do not align")
    w = exponential_weights(Phi.shape[0], lam)
    A = Phi.T @ (Phi * w[:, None])
    b = Phi.T @ (w * y)
    _check_full_rank(A)
    return scipy.linalg.solve(A, b, assume_a="pos")


def batch_regularized_ls(phi, y, theta_prev, W):
    """Closed-form minimizer of (y - phi^T theta)^2 + ||theta - theta_prev||_W^2.

    ``W`` must be symmetric positive definite; the solution is

        theta = (phi phi^T + W)^{-1} (phi y + W theta_prev).
    """
    phi = np.asarray(phi, dtype=float)
    theta_prev = np.asarray(theta_prev, dtype=float)
    W = np.asarray(W, dtype=float)
    A = np.outer(phi, phi) + W
    b = phi * float(y) + W @ theta_prev
    _check_full_rank(A)
    return scipy.linalg.solve(A, b, assume_a="pos")


def optimality_residual(Phi, y, lam, theta):
    """Norm of the weighted normal-equation residual ||Phi^T Q (y - Phi theta)||.

    Zero exactly at the weighted least-squares optimum; used to check that
    recursive estimates satisfy the stationarity condition of the batch
    problem.
    """
    Phi = np.asarray(Phi, dtype=float)
    y = np.asarray(y, dtype=float)
    theta = np.asarray(theta, dtype=float)
    lam = check_forgetting_factor(lam)
    w = exponential_weights(Phi.shape[0], lam)
    r = Phi.T @ (w * (y - Phi @ theta))
    return float(np.linalg.norm(r))


def _check_full_rank(A):
    w = np.linalg.eigvalsh(0.5 * (A + A.T))
    if w[-1] <= 0 or w[0] <= _RANK_RCOND * w[-1]:
        raise RankDeficiencyError(
            "weighted normal equations are rank deficient "
            f"(eigenvalue range [{w[0]:.3e}, {w[-1]:.3e}])"
        )
