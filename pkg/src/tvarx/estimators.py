"""Scikit-learn style front end for the recursive estimators.

``ArxForgettingRegressor`` wraps the step functions behind the familiar
``fit`` / ``get_params`` surface so the trackers compose with pipelines,
cloning and parameter sweeps. ``fit(u, y)`` consumes a whole series at once;
``partial_fit`` continues the recursion sample by sample.
"""

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_series, check_same_length
from .forgetting import SCALAR, VECTOR, ForgettingSpec
from .metrics import cod
from .model import ModelOrders, build_regressor
from .recursions import (
    DELTA_DEFAULT,
    P_FORM,
    R_FORM,
    init_state,
    step_classic,
    step_multi_r_form,
    step_vector_forgetting,
)
from .study import method_spec


class ArxForgettingRegressor(BaseEstimator):
    """Recursive ARX parameter tracker with a configurable forgetting scheme.

    Parameters
    ----------
    n, m : int
        Output- and input-polynomial orders.
    method : str
        One of 'RARX', 'VF', 'DI', 'TC', 'CS' (case-insensitive).
    lambdas : float or sequence of floats
        Forgetting factor(s): a single value for RARX, (lambda1, lambda2)
        for the others (lambda1 weights the n output parameters, lambda2
        the m input parameters); a full length-p vector is also accepted.
    delta : float
        Prior covariance scale; the recursion starts from theta = 0 and
        P = delta * I.

    Attributes
    ----------
    time_ : ndarray
        1-based time indices of the estimation window (starts at
        max(n, m) + 1, the first step with a complete regressor).
    theta_path_ : ndarray of shape (len(time_), p)
        Estimate after each processed sample.
    y_pred_ : ndarray
        Strictly causal one-step-ahead predictions over the window.
    theta_ : ndarray
        Final estimate.
    """

    def __init__(self, n=2, m=2, method="RARX", lambdas=0.98, delta=DELTA_DEFAULT):
        self.n = n
        self.m = m
        self.method = method
        self.lambdas = lambdas
        self.delta = delta

    def _orders(self):
        return ModelOrders(n=self.n, m=self.m)

    def _spec(self):
        orders = self._orders()
        lam = np.atleast_1d(np.asarray(self.lambdas, dtype=float))
        method = self.method.upper()
        if lam.size == 1:
            if method == "RARX":
                return method_spec(method, orders, float(lam[0]))
            return method_spec(method, orders, float(lam[0]), float(lam[0]))
        if lam.size == 2 and method != "RARX":
            return method_spec(method, orders, float(lam[0]), float(lam[1]))
        if lam.size == orders.p and method != "RARX":
            template = method_spec(method, orders, 0.5, 0.5)
            return ForgettingSpec(template.kind, tuple(lam))
        raise ValueError(
            f"lambdas must be a scalar, a pair, or length p={orders.p} "
            f"for method {method}, got {lam.size} values"
        )

    def _step(self, state, phi, y_t, spec):
        if spec.kind == VECTOR:
            return step_vector_forgetting(state, phi, y_t, spec.lambda_vector)
        if spec.kind == SCALAR:
            return step_classic(state, phi, y_t, spec.lambdas[0])
        return step_multi_r_form(state, phi, y_t, spec)

    def fit(self, u, y):
        """Track the parameters over the series u(1..N), y(1..N)."""
        u = as_series(u, "u")
        y = as_series(y, "y")
        check_same_length(u, y)
        orders = self._orders()
        spec = self._spec()
        form = P_FORM if spec.kind == VECTOR else R_FORM
        self.spec_ = spec
        self._state = init_state(orders.p, delta=self.delta, form=form, scheme=spec)
        self.time_ = np.empty(0, dtype=int)
        self.theta_path_ = np.empty((0, orders.p))
        self.y_pred_ = np.empty(0)
        self._u_hist = np.empty(0)
        self._y_hist = np.empty(0)
        self._t_now = 0
        return self.partial_fit(u, y)

    def partial_fit(self, u_new, y_new):
        """Feed more samples through the recursion (after ``fit`` or fresh).

        On an unfitted estimator this behaves like ``fit``; afterwards it
        extends ``theta_path_`` and ``y_pred_`` in place, keeping only the
        ``max(n, m)`` most recent samples as lag memory.
        """
        if not hasattr(self, "_state"):
            return self.fit(u_new, y_new)
        u_new = np.atleast_1d(np.asarray(u_new, dtype=float))
        y_new = np.atleast_1d(np.asarray(y_new, dtype=float))
        check_same_length(u_new, y_new)
        orders = self._orders()
        spec = self.spec_
        u = np.concatenate([self._u_hist, u_new])
        y = np.concatenate([self._y_hist, y_new])

        state = self._state
        times, thetas, preds = [], [], []
        for k in range(len(y_new)):
            t_global = self._t_now + 1 + k
            t_local = len(self._y_hist) + 1 + k
            if t_global <= orders.warmup:
                continue
            phi = build_regressor(y, u, orders, t_local)
            preds.append(phi @ state.theta)
            state = self._step(state, phi, y[t_local - 1], spec)
            thetas.append(state.theta)
            times.append(t_global)

        self._state = state
        self._t_now += len(y_new)
        keep = orders.warmup
        self._u_hist = u[len(u) - keep:] if keep else np.empty(0)
        self._y_hist = y[len(y) - keep:] if keep else np.empty(0)
        if times:
            self.time_ = np.concatenate([self.time_, times]).astype(int)
            self.theta_path_ = np.vstack([self.theta_path_, thetas])
            self.y_pred_ = np.concatenate([self.y_pred_, preds])
        self.theta_ = state.theta.copy()
        return self

    def predict(self):
        """One-step-ahead predictions over the processed window."""
        self._check_fitted()
        return self.y_pred_

    def score(self, u, y):
        """One-step-ahead coefficient of determination (percent) on (u, y).

        Runs a fresh recursion on the given series; the fitted state is left
        untouched.
        """
        fresh = ArxForgettingRegressor(**self.get_params()).fit(u, y)
        y = as_series(y, "y")
        return cod(y[self._orders().warmup:], fresh.y_pred_)

    def _check_fitted(self):
        if not hasattr(self, "theta_path_"):
            raise RuntimeError("estimator is not fitted yet; call fit first")
