"""Recursive parameter update laws.

Every step is a pure function from an :class:`EstimatorState` and one sample
(phi, y) to a new state; nothing is mutated. A state carries the estimate in
one of two algebraically equivalent bookkeepings:

* R-form: the information matrix R, updated as R <- F(R) + phi phi^T, with
  gain K = R^{-1} phi;
* P-form: the covariance P = R^{-1}, updated without forming R explicitly
  for the scalar scheme, and through one p-by-p inversion per step for the
  kernel schemes (whose map is defined on information matrices).

The information/covariance matrix is re-symmetrized after every step, and
every inversion is protected by a reciprocal-condition guard: when the guard
trips, a diagonal jitter of 1e-10 * trace / p is added once (with a logged
warning) before failing hard.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._validation import check_forgetting_factor, as_forgetting_vector, symmetrize
from .exceptions import MapDegeneracyError, SingularInformationError
from .forgetting import ForgettingSpec, SCALAR, VECTOR, apply_map

logger = logging.getLogger(__name__)

R_FORM = "R"
P_FORM = "P"

#: Reciprocal-condition threshold below which a matrix counts as singular.
RCOND_FLOOR = 1e-12

#: Relative diagonal jitter applied once when the guard trips.
JITTER_SCALE = 1e-10

#: Tolerance on the smallest eigenvalue of a mapped information matrix,
#: relative to its largest absolute eigenvalue.
MAP_DEGENERACY_TOL = 1e-10

#: Default prior covariance scale: P_0 = DELTA_DEFAULT * I (high uncertainty).
DELTA_DEFAULT = 100.0


@dataclass
class EstimatorState:
    """Entire memory of a recursion: estimate, info/covariance matrix, clock.

    ``info`` holds R in R-form and P in P-form. States are treated as values;
    the step functions return new instances.
    """

    theta: np.ndarray
    info: np.ndarray
    form: str = R_FORM
    t: int = 0
    scheme: Optional[ForgettingSpec] = None

    def __post_init__(self):
        if self.form not in (R_FORM, P_FORM):
            raise ValueError(f"form must be {R_FORM!r} or {P_FORM!r}, got {self.form!r}")
        self.theta = np.asarray(self.theta, dtype=float)
        self.info = np.asarray(self.info, dtype=float)
        p = self.theta.shape[-1]
        if self.info.shape[-2:] != (p, p):
            raise ValueError(f"info must be {p}x{p}, got shape {self.info.shape}")

    @property
    def p(self):
        return self.theta.shape[-1]


def init_state(p, delta=DELTA_DEFAULT, form=R_FORM, scheme=None):
    """High-uncertainty start: theta = 0 and P_0 = delta * I (R_0 = I / delta)."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    theta = np.zeros(p)
    info = np.eye(p) * (delta if form == P_FORM else 1.0 / delta)
    return EstimatorState(theta=theta, info=info, form=form, t=0, scheme=scheme)


def _eig_range(M):
    w = np.linalg.eigvalsh(symmetrize(M))
    return w[..., 0], w[..., -1]


def guarded_information(R, context="information matrix"):
    """Return R (jittered if necessary) or raise if numerically singular."""
    lo, hi = _eig_range(R)
    if hi <= 0 or lo <= RCOND_FLOOR * hi:
        jitter = JITTER_SCALE * np.trace(R) / R.shape[-1]
        if jitter > 0:
            logger.warning(
                "%s near singular (rcond %.3e); adding diagonal jitter %.3e",
                context,
                lo / hi if hi > 0 else 0.0,
                jitter,
            )
            R = R + jitter * np.eye(R.shape[-1])
            lo, hi = _eig_range(R)
        if hi <= 0 or lo <= RCOND_FLOOR * hi:
            raise SingularInformationError(
                f"{context} is numerically singular (rcond <= {RCOND_FLOOR:g})"
            )
    return R


def _check_map_not_degenerate(F):
    lo, hi = _eig_range(F)
    if lo < -MAP_DEGENERACY_TOL * max(hi, abs(lo)):
        raise MapDegeneracyError(
            "forgetting map lost positive definiteness "
            f"(min eigenvalue {lo:.3e} vs scale {hi:.3e})"
        )


def _phi_and_innovation(state, phi, y):
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (state.p,):
        raise ValueError(f"phi must have shape ({state.p},), got {phi.shape}")
    return phi, float(y) - phi @ state.theta


def step_classic(state, phi, y, lam):
    """One update with a single forgetting factor (classic exponential RLS).

    In R-form: R <- lam R + phi phi^T, theta <- theta + R^{-1} phi e.
    In P-form the same step runs on the covariance without forming R.
    With lam = 1 this is ordinary recursive least squares.
    """
    lam = check_forgetting_factor(lam)
    phi, e = _phi_and_innovation(state, phi, y)
    if state.form == R_FORM:
        R = symmetrize(lam * state.info + np.outer(phi, phi))
        R = guarded_information(R)
        K = np.linalg.solve(R, phi)
        return replace(state, theta=state.theta + K * e, info=R, t=state.t + 1)
    P = state.info
    v = P @ phi
    K = v / (lam + phi @ v)
    P_new = symmetrize((P - np.outer(K, v)) / lam)
    return replace(state, theta=state.theta + K * e, info=P_new, t=state.t + 1)


def step_vector_forgetting(state, phi, y, lambdas):
    """One update with vector-type forgetting (one factor per parameter).

    The covariance is inflated entrywise by 1 / sqrt(lambda_i lambda_j)
    before the measurement update, so equal factors reproduce the classic
    scalar recursion exactly:

        P~ = Lam^{-1/2} P Lam^{-1/2}
        K  = P~ phi / (1 + phi^T P~ phi)
        P  <- (I - K phi^T) P~
    """
    if state.form != P_FORM:
        raise ValueError("vector-type forgetting runs on the covariance (P-form states only)")
    lam = as_forgetting_vector(lambdas, p=state.p, name="lambdas")
    phi, e = _phi_and_innovation(state, phi, y)
    inv_sqrt = 1.0 / np.sqrt(lam)
    P_scaled = state.info * np.outer(inv_sqrt, inv_sqrt)
    v = P_scaled @ phi
    K = v / (1.0 + phi @ v)
    P_new = symmetrize(P_scaled - np.outer(K, v))
    return replace(state, theta=state.theta + K * e, info=P_new, t=state.t + 1)


def step_multi_r_form(state, phi, y, spec):
    """One multiple-forgetting update on the information matrix.

    R <- F(R) + phi phi^T with F the map of ``spec``; the new estimate is the
    minimizer of the squared innovation plus the F(R)-weighted distance to
    the previous estimate.
    """
    if state.form != R_FORM:
        raise ValueError("step_multi_r_form requires an R-form state")
    _require_matrix_scheme(spec)
    phi, e = _phi_and_innovation(state, phi, y)
    F = apply_map(spec, state.info)
    _check_map_not_degenerate(F)
    R = symmetrize(F + np.outer(phi, phi))
    R = guarded_information(R)
    K = np.linalg.solve(R, phi)
    return replace(state, theta=state.theta + K * e, info=R, t=state.t + 1, scheme=spec)


def step_multi_p_form(state, phi, y, spec):
    """Covariance-side version of :func:`step_multi_r_form`.

    The map acts on P^{-1}, so one p-by-p inversion per step is unavoidable:

        M = F(P^{-1})^{-1}
        K = M phi / (1 + phi^T M phi)
        P <- (I - K phi^T) M
    """
    if state.form != P_FORM:
        raise ValueError("step_multi_p_form requires a P-form state")
    _require_matrix_scheme(spec)
    phi, e = _phi_and_innovation(state, phi, y)
    P = guarded_information(state.info, context="covariance matrix")
    R_prev = symmetrize(np.linalg.inv(P))
    F = apply_map(spec, R_prev)
    _check_map_not_degenerate(F)
    F = guarded_information(F, context="mapped information matrix")
    M = symmetrize(np.linalg.inv(F))
    v = M @ phi
    K = v / (1.0 + phi @ v)
    P_new = symmetrize(M - np.outer(K, v))
    return replace(state, theta=state.theta + K * e, info=P_new, t=state.t + 1, scheme=spec)


def _require_matrix_scheme(spec):
    if spec.kind in (SCALAR,):
        return  # scalar map is a valid (degenerate) Hadamard map
    if spec.kind == VECTOR:
        raise ValueError(
            "vector-type forgetting has no information-matrix map; "
            "use step_vector_forgetting"
        )
