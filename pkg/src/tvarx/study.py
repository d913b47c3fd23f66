"""Estimation runs, forgetting-factor grid search, and the Monte-Carlo study.

The comparative study pits five methods against each other on simulated
time-varying ARX data:

* RARX -- classic recursive least squares with one scalar forgetting factor;
* VF   -- vector-type forgetting (per-parameter covariance scaling);
* DI / TC / CS -- the kernel forgetting maps (diagonal, tuned-correlated,
  cubic-spline) run through the information-matrix recursion.

For the multi-factor methods the factor vector is laid out as
[lambda1] * n + [lambda2] * m: one factor for the output-polynomial
parameters, one for the input-polynomial parameters. The grid search scans
all (lambda1, lambda2) pairs of a shared grid (1-D for RARX), maximizing the
one-step-ahead coefficient of determination; ties prefer slower forgetting
(larger lambda1, then larger lambda2).

Internally the grid is evaluated as one vectorized recursion batched over
grid points; the batched arithmetic is step-for-step identical to the public
single-stream step functions, which the tests assert.
"""

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from ._validation import symmetrize
from .config import METHODS, RunConfig
from .exceptions import AllGridPointsFailedError, MapDegeneracyError, SingularInformationError
from .forgetting import (
    CUBIC_SPLINE,
    DIAGONAL,
    SCALAR,
    TUNED_CORRELATED,
    VECTOR,
    ForgettingSpec,
    kernel_cs,
    kernel_diagonal,
    kernel_tc,
)
from .model import regressor_matrix
from .recursions import (
    JITTER_SCALE,
    P_FORM,
    RCOND_FLOOR,
    init_state,
    step_classic,
    step_multi_r_form,
    step_vector_forgetting,
)
from .simulate import generate_dataset

_FMT = "%.17g"


# ---------------------------------------------------------------------------
# single estimation runs


@dataclass(frozen=True)
class EstimationResult:
    """Per-step estimates and strictly causal one-step predictions."""

    t: np.ndarray
    theta_path: np.ndarray
    y_pred: np.ndarray
    scheme: ForgettingSpec


def method_spec(method, orders, lam1, lam2=None):
    """Build the ForgettingSpec for a study method from (lambda1, lambda2)."""
    method = method.upper()
    if method == "RARX":
        if lam2 is not None and not (isinstance(lam2, float) and math.isnan(lam2)):
            raise ValueError("RARX takes a single forgetting factor")
        return ForgettingSpec.scalar(lam1)
    if lam2 is None:
        raise ValueError(f"{method} needs two forgetting factors")
    lams = (float(lam1),) * orders.n + (float(lam2),) * orders.m
    kind = {"VF": VECTOR, "DI": DIAGONAL, "TC": TUNED_CORRELATED, "CS": CUBIC_SPLINE}.get(method)
    if kind is None:
        raise ValueError(f"unknown method {method!r}; valid: {list(METHODS)}")
    return ForgettingSpec(kind, lams)


def run_estimation(ds, spec, delta=100.0):
    """Run one estimator over the dataset's estimation window.

    The window starts at t = max(n, m) + 1 (first complete regressor). The
    prediction at t always uses the estimate from step t - 1.
    """
    orders = ds.orders
    p = orders.p
    if spec.kind != SCALAR and spec.p != p:
        raise ValueError(f"spec has {spec.p} factors but the model has p={p} parameters")
    Phi, ts = regressor_matrix(ds.y, ds.u, orders)
    if spec.kind == VECTOR:
        state = init_state(p, delta=delta, form=P_FORM, scheme=spec)
        lam_vec = spec.lambda_vector

        def stepper(s, phi, y):
            return step_vector_forgetting(s, phi, y, lam_vec)

    elif spec.kind == SCALAR:
        state = init_state(p, delta=delta, scheme=spec)
        lam = spec.lambdas[0]

        def stepper(s, phi, y):
            return step_classic(s, phi, y, lam)

    else:
        state = init_state(p, delta=delta, scheme=spec)

        def stepper(s, phi, y):
            return step_multi_r_form(s, phi, y, spec)

    theta_path = np.empty((len(ts), p))
    y_pred = np.empty(len(ts))
    for k, t in enumerate(ts):
        phi = Phi[k]
        y_pred[k] = phi @ state.theta
        try:
            state = stepper(state, phi, ds.y[t - 1])
        except (SingularInformationError, MapDegeneracyError) as exc:
            raise type(exc)(f"{exc} (at step t={t})") from None
        theta_path[k] = state.theta
    return EstimationResult(t=ts, theta_path=theta_path, y_pred=y_pred, scheme=spec)


# ---------------------------------------------------------------------------
# vectorized grid evaluation

_KERNELS = {"DI": kernel_diagonal, "TC": kernel_tc, "CS": kernel_cs}


@dataclass(frozen=True)
class GridTable:
    """COD/ATF of every grid candidate for one (dataset, method)."""

    method: str
    lam1: np.ndarray
    lam2: np.ndarray
    cod: np.ndarray
    atf: np.ndarray
    failed: np.ndarray


def _grid_candidates(method, grid):
    grid = np.asarray(grid, dtype=float)
    if method == "RARX":
        return grid.copy(), np.full(grid.shape, np.nan)
    l1, l2 = np.meshgrid(grid, grid, indexing="ij")
    return l1.ravel(), l2.ravel()


def evaluate_grid(ds, method, grid, delta=100.0):
    """Run every grid candidate through the recursion in one vectorized pass."""
    method = method.upper()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; valid: {list(METHODS)}")
    orders = ds.orders
    n, m, p = orders.n, orders.m, orders.p
    lam1, lam2 = _grid_candidates(method, grid)
    G = lam1.size

    Phi, ts = regressor_matrix(ds.y, ds.u, orders)
    yw = ds.y[orders.warmup :]
    T = len(ts)

    theta = np.zeros((G, p))
    eye = np.eye(p)
    failed = np.zeros(G, dtype=bool)

    if method == "VF":
        P = np.broadcast_to(delta * eye, (G, p, p)).copy()
        lam_vec = np.concatenate(
            [np.repeat(lam1[:, None], n, axis=1), np.repeat(lam2[:, None], m, axis=1)], axis=1
        )
        scale = 1.0 / np.sqrt(lam_vec[:, :, None] * lam_vec[:, None, :])
    else:
        R = np.broadcast_to(eye / delta, (G, p, p)).copy()
        if method == "RARX":
            Q = None
            lam_scalar = lam1[:, None, None]
        else:
            lam_vec = np.concatenate(
                [np.repeat(lam1[:, None], n, axis=1), np.repeat(lam2[:, None], m, axis=1)], axis=1
            )
            Q = _KERNELS[method](lam_vec)

    ssr = np.zeros(G)
    atf_acc = np.zeros(G)
    truth = ds.trajectory.theta[orders.warmup :] if ds.trajectory is not None else None
    truth_norms = np.linalg.norm(truth, axis=1) if truth is not None else None

    for k in range(T):
        phi = Phi[k]
        y_t = yw[k]
        e = y_t - theta @ phi
        ssr += e * e

        if method == "VF":
            P_scaled = P * scale
            v = P_scaled @ phi
            K = v / (1.0 + v @ phi)[:, None]
            P = symmetrize(P_scaled - K[:, :, None] * v[:, None, :])
        else:
            F = Q * R if Q is not None else lam_scalar * R
            Rn = symmetrize(F + np.outer(phi, phi))
            w = np.linalg.eigvalsh(Rn)
            bad = ~failed & ((w[:, -1] <= 0) | (w[:, 0] <= RCOND_FLOOR * w[:, -1]))
            if bad.any():
                tr = np.trace(Rn[bad], axis1=-2, axis2=-1)
                Rn[bad] += (JITTER_SCALE * tr / p)[:, None, None] * eye
                w2 = np.linalg.eigvalsh(Rn[bad])
                still = (w2[:, -1] <= 0) | (w2[:, 0] <= RCOND_FLOOR * w2[:, -1])
                newly = np.flatnonzero(bad)[still]
                failed[newly] = True
                Rn[failed] = eye
            K = np.linalg.solve(Rn, np.broadcast_to(phi, (G, p))[..., None])[..., 0]
            R = Rn

        theta = theta + K * e[:, None]
        if truth is not None:
            atf_acc += np.linalg.norm(theta - truth[k], axis=1) / truth_norms[k]

    with np.errstate(invalid="ignore"):
        nonfinite = ~np.isfinite(ssr) | ~np.all(np.isfinite(theta), axis=1)
    failed |= nonfinite

    sst = float(np.sum((yw - yw.mean()) ** 2))
    cod = (1.0 - ssr / sst) * 100.0
    atf = (1.0 - atf_acc / T) * 100.0 if truth is not None else np.full(G, np.nan)
    cod[failed] = -np.inf
    atf[failed] = np.nan
    return GridTable(method=method, lam1=lam1, lam2=lam2, cod=cod, atf=atf, failed=failed)


def _select_best(table):
    """Index of the best candidate: max COD, ties to larger lambda1 then lambda2."""
    if bool(table.failed.all()):
        raise AllGridPointsFailedError(
            f"every grid candidate failed for method {table.method}"
        )
    best = np.max(table.cod)
    idx = np.flatnonzero(table.cod == best)
    l2 = np.nan_to_num(table.lam2[idx], nan=0.0)
    order = np.lexsort((l2, table.lam1[idx]))
    return int(idx[order[-1]])


def grid_search(ds, method, grid, delta=100.0):
    """Best forgetting factor(s) on the grid and the COD they achieve.

    Returns ``(lam, cod)`` for RARX and ``((lam1, lam2), cod)`` otherwise.
    """
    table = evaluate_grid(ds, method, grid, delta=delta)
    k = _select_best(table)
    if table.method == "RARX":
        return float(table.lam1[k]), float(table.cod[k])
    return (float(table.lam1[k]), float(table.lam2[k])), float(table.cod[k])


# ---------------------------------------------------------------------------
# Monte-Carlo study


@dataclass(frozen=True)
class StudyRecord:
    """Grid-search outcome of one (run, method)."""

    run: int
    method: str
    lambda1: float
    lambda2: float
    cod: float
    atf: float
    failed: bool


@dataclass(frozen=True)
class StudyReport:
    records: tuple
    config: RunConfig
    summary: dict


def run_seed(master_seed, run):
    """64-bit dataset seed for one run, derived from the master seed."""
    ss = np.random.SeedSequence([int(master_seed), int(run)])
    return int(ss.generate_state(1, np.uint64)[0])


def _study_one_run(config, run):
    ds = generate_dataset(config, run_seed(config.master_seed, run))
    records = []
    for method in config.methods:
        try:
            table = evaluate_grid(ds, method, config.grid_array, delta=config.delta)
            k = _select_best(table)
            records.append(
                StudyRecord(
                    run=run,
                    method=method,
                    lambda1=float(table.lam1[k]),
                    lambda2=float(table.lam2[k]),
                    cod=float(table.cod[k]),
                    atf=float(table.atf[k]),
                    failed=False,
                )
            )
        except AllGridPointsFailedError:
            records.append(
                StudyRecord(
                    run=run,
                    method=method,
                    lambda1=float("nan"),
                    lambda2=float("nan"),
                    cod=float("nan"),
                    atf=float("nan"),
                    failed=True,
                )
            )
    return records


def _study_worker(args):
    config, run = args
    return run, _study_one_run(config, run)


def iter_study_runs(config):
    """Yield (run, records) in run order, parallelizing across runs if asked.

    Every run's data derives only from (master_seed, run), so the results do
    not depend on the degree of parallelism.
    """
    runs = range(config.runs)
    if config.jobs <= 1:
        for run in runs:
            yield run, _study_one_run(config, run)
        return
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        buffered = {}
        next_run = 0
        for run, records in pool.map(_study_worker, [(config, r) for r in runs]):
            buffered[run] = records
            while next_run in buffered:
                yield next_run, buffered.pop(next_run)
                next_run += 1


def monte_carlo(config):
    """Full study: one dataset per run, grid search per method, summarized."""
    records = []
    for _, recs in iter_study_runs(config):
        records.extend(recs)
    return StudyReport(records=tuple(records), config=config, summary=summarize(records, config))


def _five_number(values):
    arr = np.asarray(values, dtype=float)
    arr = arr[np.isfinite(arr)]
    if arr.size == 0:
        return None
    q = np.percentile(arr, [0, 25, 50, 75, 100])
    return {
        "min": float(q[0]),
        "q1": float(q[1]),
        "median": float(q[2]),
        "q3": float(q[3]),
        "max": float(q[4]),
        "mean": float(arr.mean()),
    }


def summarize(records, config):
    """Per-method quartile summary plus failure counts and a config echo."""
    methods = {}
    for method in config.methods:
        recs = [r for r in records if r.method == method]
        ok = [r for r in recs if not r.failed]
        methods[method] = {
            "lambda1": _five_number([r.lambda1 for r in ok]),
            "lambda2": _five_number([r.lambda2 for r in ok]),
            "cod": _five_number([r.cod for r in ok]),
            "atf": _five_number([r.atf for r in ok]),
            "failed_runs": sum(1 for r in recs if r.failed),
        }
    cfg = asdict(config)
    cfg["grid"] = [float(v) for v in cfg["grid"]]
    cfg["methods"] = list(cfg["methods"])
    return {
        "master_seed": config.master_seed,
        "runs": config.runs,
        "methods": methods,
        "config": cfg,
    }


# ---------------------------------------------------------------------------
# serialization

CSV_COLUMNS = ("run", "method", "lambda1_opt", "lambda2_opt", "cod", "atf", "failed")


def format_record_row(rec):
    def num(v):
        return "" if (v is None or (isinstance(v, float) and math.isnan(v))) else _FMT % v

    return [str(rec.run), rec.method, num(rec.lambda1), num(rec.lambda2),
            num(rec.cod), num(rec.atf), "1" if rec.failed else "0"]


def write_study_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(format_record_row(rec))


def read_study_csv(path):
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected study CSV header {header}")
        for row in reader:
            if not row:
                continue
            records.append(
                StudyRecord(
                    run=int(row[0]),
                    method=row[1],
                    lambda1=float(row[2]) if row[2] else float("nan"),
                    lambda2=float(row[3]) if row[3] else float("nan"),
                    cod=float(row[4]) if row[4] else float("nan"),
                    atf=float(row[5]) if row[5] else float("nan"),
                    failed=row[6] == "1",
                )
            )
    return records


def write_summary_json(summary, path):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
