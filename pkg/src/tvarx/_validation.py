"""Input validation helpers used by the estimators, the simulator and the CLI."""

import numpy as np


def as_series(x, name="series"):
    """Coerce ``x`` to a 1-D float array, accepting column vectors."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_same_length(u, y):
    if len(u) != len(y):
        raise ValueError(f"input and output series differ in length: {len(u)} vs {len(y)}")


def check_forgetting_factor(lam, name="lambda"):
    """A forgetting factor must lie in (0, 1]; 1 means no forgetting."""
    lam = float(lam)
    if not (0.0 < lam <= 1.0):
        raise ValueError(f"{name} must lie in (0, 1], got {lam}")
    return lam


def as_forgetting_vector(lambdas, p=None, name="lambda"):
    arr = np.asarray(lambdas, dtype=float)
    if arr.ndim == 0:
        arr = arr[None]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a scalar or a vector, got shape {arr.shape}")
    if p is not None and arr.shape[0] != p:
        raise ValueError(f"{name} must have length {p}, got {arr.shape[0]}")
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise ValueError(f"every entry of {name} must lie in (0, 1], got {arr.tolist()}")
    return arr


def as_square_matrix(M, p=None, name="matrix"):
    arr = np.asarray(M, dtype=float)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if p is not None and arr.shape[-1] != p:
        raise ValueError(f"{name} must be {p}x{p}, got shape {arr.shape}")
    return arr


def symmetrize(M):
    """Average a (stack of) square matrices with its transpose."""
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def check_symmetric(M, name="matrix", rtol=1e-12):
    scale = np.max(np.abs(M))
    if scale > 0 and np.max(np.abs(M - np.swapaxes(M, -1, -2))) > rtol * scale:
        raise ValueError(f"{name} is not symmetric to within {rtol:g} relative tolerance")
