"""Goodness-of-fit metrics for one-step prediction and parameter tracking."""

import numpy as np

from ._validation import as_series


def cod(y, y_pred):
    """One-step-ahead coefficient of determination, in percent.

    100 * (1 - sum (y - y_pred)^2 / sum (y - mean(y))^2). Equals 100 for a
    perfect predictor, 0 for the sample-mean predictor, and is unbounded
    below for worse ones.
    """
    y = as_series(y, "y")
    y_pred = as_series(y_pred, "y_pred")
    if len(y) != len(y_pred):
        raise ValueError(f"series lengths differ: {len(y)} vs {len(y_pred)}")
    if len(y) < 2:
        raise ValueError("need at least two samples")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise ValueError("output series is constant; coefficient of determination undefined")
    ss_res = float(np.sum((y - y_pred) ** 2))
    return (1.0 - ss_res / ss_tot) * 100.0


def atf(theta_hat_seq, theta_true_seq):
    """Average track fit of a parameter trajectory, in percent.

    100 * (1 - mean_t ||theta_hat_t - theta_t|| / ||theta_t||) with Euclidean
    norms; 100 means perfect tracking, 0 means estimates as far from the
    truth as the truth is from zero.
    """
    theta_hat = np.atleast_2d(np.asarray(theta_hat_seq, dtype=float))
    theta_true = np.atleast_2d(np.asarray(theta_true_seq, dtype=float))
    if theta_hat.shape != theta_true.shape:
        raise ValueError(f"trajectory shapes differ: {theta_hat.shape} vs {theta_true.shape}")
    true_norms = np.linalg.norm(theta_true, axis=1)
    if np.any(true_norms == 0.0):
        raise ValueError("true parameter vector has zero norm at some step")
    rel = np.linalg.norm(theta_hat - theta_true, axis=1) / true_norms
    return (1.0 - float(rel.mean())) * 100.0
