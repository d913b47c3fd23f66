"""Command-line front end.

Subcommands
-----------
simulate   generate one dataset file
estimate   run one estimator over a dataset file
study      run the full Monte-Carlo comparison and write CSV + JSON
kernels    print a forgetting kernel, or dump the cross-entry comparison curve

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 total study failure. Data files carry 17 significant digits; console
tables use 4.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .config import (
    RunConfig,
    parse_config_file,
    parse_grid_spec,
    parse_methods_spec,
    with_overrides,
)
from .exceptions import (
    AllGridPointsFailedError,
    ConfigError,
    MapDegeneracyError,
    RankDeficiencyError,
    SingularInformationError,
    UnstableTrajectoryError,
)
from .forgetting import (
    CUBIC_SPLINE,
    DIAGONAL,
    TUNED_CORRELATED,
    ForgettingSpec,
    remark_curve,
)
from .metrics import atf, cod
from .simulate import generate_dataset, load_dataset, save_dataset
from .study import (
    format_record_row,
    CSV_COLUMNS,
    iter_study_runs,
    method_spec,
    run_estimation,
    summarize,
    write_summary_json,
)

_FMT = "%.17g"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_STUDY_FAILED = 3


class _CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        raise _CliError(f"{self.prog}: {message}", EXIT_USAGE)


def _build_parser():
    parser = _Parser(prog="tvarx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tvarx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a dataset file")
    p_sim.add_argument("--config", help="run configuration file")
    p_sim.add_argument("--seed", type=int, default=0, help="dataset seed (default 0)")
    p_sim.add_argument("--out", required=True, help="output dataset path")

    p_est = sub.add_parser("estimate", help="run one estimator over a dataset")
    p_est.add_argument("--data", required=True, help="dataset file")
    p_est.add_argument("--method", required=True, help="RARX, VF, DI, TC or CS")
    p_est.add_argument("--lambdas", required=True,
                       help="forgetting factor(s): one value for RARX, two otherwise")
    p_est.add_argument("--out", help="per-step CSV output path")
    p_est.add_argument("--delta", type=float, default=100.0, help="prior covariance scale")

    p_study = sub.add_parser("study", help="run the Monte-Carlo comparison")
    p_study.add_argument("--config", help="run configuration file")
    p_study.add_argument("--seed", type=int, help="master seed override")
    p_study.add_argument("--runs", type=int, help="number of runs override")
    p_study.add_argument("--grid", help="grid override: 'start:stop:count' or comma list")
    p_study.add_argument("--methods", help="comma-separated method subset")
    p_study.add_argument("--jobs", type=int, help="parallel worker processes")
    p_study.add_argument("--out", required=True, help="output directory")

    p_ker = sub.add_parser("kernels", help="print forgetting kernels")
    p_ker.add_argument("--kind", default="tc", help="di, tc or cs")
    p_ker.add_argument("--lambdas", help="comma-separated forgetting factors")
    p_ker.add_argument("--remark", action="store_true",
                       help="dump the cubic-spline vs sqrt cross-entry curves "
                            "(lambda1 = 0.3, 200-point lambda2 grid)")
    p_ker.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def _load_config(path):
    if path is None:
        return RunConfig()
    try:
        return parse_config_file(path)
    except FileNotFoundError:
        raise _CliError(f"config file not found: {path}", EXIT_USAGE)
    except ConfigError as exc:
        raise _CliError(f"invalid config: {exc}", EXIT_USAGE)


def _cmd_simulate(args):
    config = _load_config(args.config)
    try:
        ds = generate_dataset(config, args.seed)
    except UnstableTrajectoryError as exc:
        raise _CliError(str(exc), EXIT_DATA)
    save_dataset(ds, args.out)
    print(
        f"wrote {args.out}: N={ds.N} p={ds.orders.p} "
        f"sigma2={ds.sigma2:.4g} seed={ds.seed}"
    )
    return EXIT_OK


def _parse_lambda_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _CliError(f"cannot parse lambda list {text!r}", EXIT_USAGE)
    if not values:
        raise _CliError("empty lambda list", EXIT_USAGE)
    return values


def _cmd_estimate(args):
    try:
        ds = load_dataset(args.data)
    except FileNotFoundError:
        raise _CliError(f"dataset not found: {args.data}", EXIT_DATA)
    except (ValueError, KeyError) as exc:
        raise _CliError(f"cannot parse dataset {args.data}: {exc}", EXIT_DATA)
    lams = _parse_lambda_list(args.lambdas)
    method = args.method.upper()
    try:
        if method == "RARX":
            if len(lams) != 1:
                raise _CliError(
                    f"RARX takes exactly one forgetting factor, got {len(lams)}", EXIT_USAGE
                )
            spec = method_spec(method, ds.orders, lams[0])
        else:
            if len(lams) != 2:
                raise _CliError(
                    f"{method} takes exactly two forgetting factors, got {len(lams)}", EXIT_USAGE
                )
            spec = method_spec(method, ds.orders, lams[0], lams[1])
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_USAGE)
    try:
        res = run_estimation(ds, spec, delta=args.delta)
    except (SingularInformationError, MapDegeneracyError) as exc:
        raise _CliError(f"estimation failed: {exc}", EXIT_DATA)

    window = slice(ds.orders.warmup, None)
    cod_val = cod(ds.y[window], res.y_pred)
    atf_val = None
    if ds.trajectory is not None:
        atf_val = atf(res.theta_path, ds.trajectory.theta[window])

    if args.out:
        p = ds.orders.p
        lines = ["t," + ",".join(f"theta_{i + 1}" for i in range(p)) + ",y_pred"]
        for k, t in enumerate(res.t):
            row = [str(int(t))] + [_FMT % v for v in res.theta_path[k]] + [_FMT % res.y_pred[k]]
            lines.append(",".join(row))
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    print(f"COD {cod_val:.4g}%")
    print(f"ATF {atf_val:.4g}%" if atf_val is not None else "ATF unavailable (no ground truth)")
    return EXIT_OK


def _cmd_study(args):
    import os

    config = _load_config(args.config)
    try:
        grid = parse_grid_spec(args.grid) if args.grid else None
    except ConfigError as exc:
        raise _CliError(str(exc), EXIT_USAGE)
    methods = parse_methods_spec(args.methods) if args.methods else None
    try:
        config = with_overrides(
            config,
            master_seed=args.seed,
            runs=args.runs,
            grid=grid,
            methods=methods,
            jobs=args.jobs,
        )
    except ConfigError as exc:
        raise _CliError(f"invalid config: {exc}", EXIT_USAGE)

    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "study.csv")
    json_path = os.path.join(args.out, "summary.json")

    records = []
    with open(csv_path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        fh.flush()
        for _, recs in iter_study_runs(config):
            for rec in recs:
                fh.write(",".join(format_record_row(rec)) + "\n")
            fh.flush()
            records.extend(recs)

    summary = summarize(records, config)
    write_summary_json(summary, json_path)

    n_failed = sum(1 for r in records if r.failed)
    print(f"{config.runs} runs x {len(config.methods)} methods "
          f"({n_failed} failures) -> {csv_path}")
    print(f"{'method':<8}{'median COD%':>14}{'median ATF%':>14}")
    for method in config.methods:
        stats = summary["methods"][method]
        cod_med = stats["cod"]["median"] if stats["cod"] else float("nan")
        atf_med = stats["atf"]["median"] if stats["atf"] else float("nan")
        print(f"{method:<8}{cod_med:>14.4g}{atf_med:>14.4g}")
    if n_failed == len(records):
        raise _CliError("every run failed", EXIT_STUDY_FAILED)
    return EXIT_OK


_KERNEL_KINDS = {"di": DIAGONAL, "tc": TUNED_CORRELATED, "cs": CUBIC_SPLINE}


def _cmd_kernels(args):
    if args.remark:
        lam2 = np.linspace(0.0, 1.0, 202)[1:-1]
        f, g = remark_curve(0.3, lam2)
        lines = ["lambda2,f,g"]
        lines += [f"{_FMT % x},{_FMT % fv},{_FMT % gv}" for x, fv, gv in zip(lam2, f, g)]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            print(f"wrote {args.out}: {len(lam2)} grid points")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if not args.lambdas:
        raise _CliError("kernels needs --lambdas (or --remark)", EXIT_USAGE)
    kind = _KERNEL_KINDS.get(args.kind.lower())
    if kind is None:
        raise _CliError(f"unknown kernel kind {args.kind!r}; valid: di, tc, cs", EXIT_USAGE)
    lams = _parse_lambda_list(args.lambdas)
    try:
        spec = ForgettingSpec(kind, tuple(lams))
    except ValueError as exc:
        raise _CliError(str(exc), EXIT_USAGE)
    Q = spec.kernel()
    if args.out:
        with open(args.out, "w") as fh:
            for row in Q:
                fh.write(",".join(_FMT % v for v in row) + "\n")
        print(f"wrote {args.out}")
    else:
        for row in Q:
            print("  ".join(f"{v:.4g}" for v in row))
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "study": _cmd_study,
    "kernels": _cmd_kernels,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except AllGridPointsFailedError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_STUDY_FAILED
    except (RankDeficiencyError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
