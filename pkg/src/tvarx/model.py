"""ARX model conventions: orders, parameter vectors and regressors.

The parameter vector stacks the negated output-lag coefficients ahead of the
input-lag coefficients,

    theta_t = [-a_{t,1} ... -a_{t,n}, b_{t,1} ... b_{t,m}],

and the regressor mirrors that ordering,

    phi(t) = [y(t-1) ... y(t-n), u(t-1) ... u(t-m)],

so that ``phi(t) @ theta`` is the one-step-ahead prediction of y(t).

Time indices are 1-based in the API (t = 1 ... N); sample t is stored at array
position t - 1.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelOrders:
    """Degrees of the output polynomial (n) and the input polynomial (m)."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"orders must be non-negative, got n={self.n}, m={self.m}")
        if self.n + self.m < 1:
            raise ValueError("at least one of n, m must be positive")

    @property
    def p(self):
        """Number of estimated parameters."""
        return self.n + self.m

    @property
    def warmup(self):
        """Last index without a complete regressor; recursion starts at warmup + 1."""
        return max(self.n, self.m)


def build_regressor(y_history, u_history, orders, t):
    """Assemble phi(t) from lagged outputs and inputs.

    Parameters
    ----------
    y_history, u_history : array_like
        Samples y(1) ... y(T) and u(1) ... u(T) with T >= t - 1.
    orders : ModelOrders
    t : int
        1-based time index; requires t >= max(n, m) + 1.

    Returns
    -------
    ndarray of shape (p,)
    """
    y_history = np.asarray(y_history, dtype=float)
    u_history = np.asarray(u_history, dtype=float)
    if t <= orders.warmup:
        raise IndexError(
            f"regressor undefined at t={t}; need t >= {orders.warmup + 1} "
            f"for orders (n={orders.n}, m={orders.m})"
        )
    if len(y_history) < t - 1 or len(u_history) < t - 1:
        raise IndexError(f"histories too short for t={t}")
    phi = np.empty(orders.p)
    for i in range(1, orders.n + 1):
        phi[i - 1] = y_history[t - 1 - i]
    for i in range(1, orders.m + 1):
        phi[orders.n + i - 1] = u_history[t - 1 - i]
    return phi


def regressor_matrix(y, u, orders):
    """Stack phi(t) for t = warmup+1 ... N as rows, oldest first.

    Returns the (N - warmup, p) matrix together with the matching 1-based
    time indices.
    """
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    N = len(y)
    t0 = orders.warmup + 1
    ts = np.arange(t0, N + 1)
    Phi = np.empty((len(ts), orders.p))
    for k, t in enumerate(ts):
        Phi[k] = build_regressor(y, u, orders, int(t))
    return Phi, ts


def theta_from_polynomials(a_coeffs, b_coeffs):
    """Parameter vector from polynomial coefficients.

    ``a_coeffs`` is the full vector [1, a_1 ... a_n] of the monic output
    polynomial; ``b_coeffs`` is [b_1 ... b_m].
    """
    a_coeffs = np.asarray(a_coeffs, dtype=float)
    b_coeffs = np.asarray(b_coeffs, dtype=float)
    if a_coeffs.ndim != 1 or a_coeffs[0] != 1.0:
        raise ValueError("a_coeffs must be [1, a_1 ... a_n] with leading 1")
    return np.concatenate([-a_coeffs[1:], b_coeffs])


def polynomials_from_theta(theta, orders):
    """Inverse of :func:`theta_from_polynomials`; returns (a_coeffs, b_coeffs)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (orders.p,):
        raise ValueError(f"theta must have shape ({orders.p},), got {theta.shape}")
    a_coeffs = np.concatenate([[1.0], -theta[: orders.n]])
    b_coeffs = theta[orders.n :].copy()
    return a_coeffs, b_coeffs
