"""Forgetting schemes and the kernels behind the matrix forgetting maps.

Discounting past information by a single factor generalizes to one factor per
parameter through a Hadamard product: the information matrix R is multiplied
entrywise by a kernel Q built from the forgetting vector. Three kernels are
provided:

* ``diagonal`` -- entries survive only between parameters sharing the same
  factor (exact equality of the configured values); decouples parameter groups.
* ``tuned-correlated`` -- the cross entry between two parameters is discounted
  by the smaller of their two factors.
* ``cubic-spline`` -- cross entries blend both factors through the cubic-spline
  kernel on length scales l_i = (3 lambda_i)^(1/3), so Q_ii = l_i^3 / 3 equals
  lambda_i.

All kernel builders accept a trailing-axis vector of factors and broadcast
over leading batch dimensions.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._validation import as_forgetting_vector, as_square_matrix, check_symmetric

SCALAR = "scalar"
VECTOR = "vector"
DIAGONAL = "diagonal"
TUNED_CORRELATED = "tuned-correlated"
CUBIC_SPLINE = "cubic-spline"

KINDS = (SCALAR, VECTOR, DIAGONAL, TUNED_CORRELATED, CUBIC_SPLINE)

#: Kinds whose forgetting map is a Hadamard product with a kernel matrix.
KERNEL_KINDS = (DIAGONAL, TUNED_CORRELATED, CUBIC_SPLINE)


@dataclass(frozen=True)
class ForgettingSpec:
    """Which forgetting scheme to run and with which factors.

    ``lambdas`` has one entry for the scalar scheme and one entry per
    parameter for all others. Factors live in (0, 1]; 1 disables forgetting
    for that parameter.
    """

    kind: str
    lambdas: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown forgetting kind {self.kind!r}; expected one of {KINDS}")
        lams = tuple(float(v) for v in np.atleast_1d(np.asarray(self.lambdas, dtype=float)))
        as_forgetting_vector(lams, name="lambdas")
        if self.kind == SCALAR and len(lams) != 1:
            raise ValueError(f"scalar forgetting takes exactly one factor, got {len(lams)}")
        object.__setattr__(self, "lambdas", lams)

    @property
    def p(self):
        return len(self.lambdas)

    @property
    def lambda_vector(self):
        return np.asarray(self.lambdas)

    def kernel(self):
        """The p-by-p kernel Q for this spec (cached; kernel kinds only)."""
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"{self.kind!r} forgetting has no kernel matrix")
        return _cached_kernel(self.kind, self.lambdas).copy()

    @classmethod
    def scalar(cls, lam):
        return cls(SCALAR, (float(lam),))

    @classmethod
    def vector_type(cls, lambdas):
        return cls(VECTOR, tuple(np.atleast_1d(lambdas)))

    @classmethod
    def diagonal(cls, lambdas):
        return cls(DIAGONAL, tuple(np.atleast_1d(lambdas)))

    @classmethod
    def tuned_correlated(cls, lambdas):
        return cls(TUNED_CORRELATED, tuple(np.atleast_1d(lambdas)))

    @classmethod
    def cubic_spline(cls, lambdas):
        return cls(CUBIC_SPLINE, tuple(np.atleast_1d(lambdas)))


def cs_length_scales(lambdas):
    """Length scales l_i = (3 lambda_i)^(1/3) of the cubic-spline kernel."""
    lam = as_forgetting_vector(lambdas, name="lambdas")
    return np.cbrt(3.0 * lam)


def kernel_diagonal(lambdas):
    """Q_ij = lambda_i where lambda_i == lambda_j (bitwise), else 0.

    Parameters sharing the exact same configured factor form all-lambda
    blocks; everything across groups is zeroed.
    """
    lam = _kernel_input(lambdas)
    li = lam[..., :, None]
    lj = lam[..., None, :]
    return np.where(li == lj, li, 0.0)


def kernel_tc(lambdas):
    """Q_ij = min(lambda_i, lambda_j): cross terms follow the faster-forgetting side."""
    lam = _kernel_input(lambdas)
    return np.minimum(lam[..., :, None], lam[..., None, :])


def kernel_cs(lambdas):
    """Cubic-spline kernel on the length scales l_i = (3 lambda_i)^(1/3).

    With s = min(l_i, l_j) and t = max(l_i, l_j),

        Q_ij = s^2 / 2 * (t - s / 3),

    which pins Q_ii = l_i^3 / 3 = lambda_i and keeps Q positive semidefinite
    for any positive length scales.
    """
    lam = _kernel_input(lambdas)
    ell = np.cbrt(3.0 * lam)
    s = np.minimum(ell[..., :, None], ell[..., None, :])
    t = np.maximum(ell[..., :, None], ell[..., None, :])
    return 0.5 * s * s * (t - s / 3.0)


_KERNEL_BUILDERS = {
    DIAGONAL: kernel_diagonal,
    TUNED_CORRELATED: kernel_tc,
    CUBIC_SPLINE: kernel_cs,
}


@lru_cache(maxsize=4096)
def _cached_kernel(kind, lambdas):
    Q = _KERNEL_BUILDERS[kind](np.asarray(lambdas))
    Q.setflags(write=False)
    return Q


def _kernel_input(lambdas):
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim == 0:
        raise ValueError("kernel factors must form a vector")
    if np.any(lam <= 0.0) or np.any(lam > 1.0):
        raise ValueError("every forgetting factor must lie in (0, 1]")
    return lam


def sqrt_cross_reference(lambdas):
    """Reference matrix with entries sqrt(lambda_i * lambda_j).

    Used only to compare cross-entry discounting against the cubic-spline
    kernel; not available as an estimation scheme.
    """
    lam = _kernel_input(lambdas)
    return np.sqrt(lam[..., :, None] * lam[..., None, :])


def remark_curve(lam1, lam2_grid):
    """Cross-entry curves f and g for a fixed first factor.

    f(lam2) is the cubic-spline cross entry branch l1^2/2 * (l2 - l1/3) and
    g(lam2) = sqrt(lam1 * lam2) is the geometric-mean reference. Returns
    ``(f, g)`` evaluated on ``lam2_grid``.
    """
    lam1 = float(lam1)
    lam2 = np.asarray(lam2_grid, dtype=float)
    l1 = np.cbrt(3.0 * lam1)
    l2 = np.cbrt(3.0 * lam2)
    f = 0.5 * l1 * l1 * (l2 - l1 / 3.0)
    g = np.sqrt(lam1 * lam2)
    return f, g


def apply_map(spec, R):
    """Apply the forgetting map of ``spec`` to an information matrix.

    Scalar forgetting returns lambda * R; kernel kinds return the entrywise
    product Q * R. Vector-type forgetting is not a map on information
    matrices (its scaling acts on the covariance inside the recursion) and is
    rejected.
    """
    R = as_square_matrix(R, name="R")
    check_symmetric(R, name="R")
    if spec.kind == SCALAR:
        return spec.lambdas[0] * R
    if spec.kind == VECTOR:
        raise ValueError("vector-type forgetting does not define an information-matrix map")
    if R.shape[-1] != spec.p:
        raise ValueError(f"R is {R.shape[-1]}x{R.shape[-1]} but spec has p={spec.p}")
    return _cached_kernel(spec.kind, spec.lambdas) * R
