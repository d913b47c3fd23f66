"""The four comparison figures."""

import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .data import SchemaError, load_remark_curve, load_study, methods_present

FIGURE_KINDS = ("forgetting-factors", "atf", "cod", "remark-curve")

_BOX_STYLE = dict(whis=1.5, showfliers=True, widths=0.6)


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input file, figure kind, output image path."""

    input_path: str
    kind: str
    output_path: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; valid: {list(FIGURE_KINDS)}")


def _finite(values):
    return [v for v in values if not math.isnan(v)]


def _column(rows, method, attr):
    return _finite([getattr(r, attr) for r in rows if r.method == method and not r.failed])


def make_forgetting_factor_figure(rows):
    """Selected factors: one box for the scalar baseline, then the fast-side
    factor of each multi-factor method, then the slow-side factor of each."""
    methods = methods_present(rows)
    multi = [m for m in methods if m != "RARX"]
    data, labels = [], []
    if "RARX" in methods:
        data.append(_column(rows, "RARX", "lambda1"))
        labels.append("RARX")
    for m in multi:
        data.append(_column(rows, m, "lambda1"))
        labels.append(f"{m}\n$\\lambda_1$")
    for m in multi:
        data.append(_column(rows, m, "lambda2"))
        labels.append(f"{m}\n$\\lambda_2$")
    fig, ax = plt.subplots(figsize=(1.3 * max(len(data), 4), 4.0))
    ax.boxplot(data, tick_labels=labels, **_BOX_STYLE)
    ax.set_ylabel("selected forgetting factor")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


def make_metric_figure(rows, attr, ylabel):
    methods = methods_present(rows)
    data = [_column(rows, m, attr) for m in methods]
    fig, ax = plt.subplots(figsize=(1.3 * max(len(data), 4), 4.0))
    ax.boxplot(data, tick_labels=methods, **_BOX_STYLE)
    ax.set_ylabel(ylabel)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


def make_remark_figure(lam2, f, g):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(lam2, f, label="$f(\\lambda_2)$ (cubic-spline cross entry)")
    ax.plot(lam2, g, "--", label="$g(\\lambda_2) = \\sqrt{\\lambda_1\\lambda_2}$")
    ax.set_xlabel("$\\lambda_2$")
    ax.set_ylabel("cross-entry weight")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def make_figure(kind, input_path):
    """Build (but do not save) the figure for one input file."""
    if kind == "remark-curve":
        lam2, f, g = load_remark_curve(input_path)
        return make_remark_figure(lam2, f, g)
    rows = load_study(input_path)
    if kind == "forgetting-factors":
        return make_forgetting_factor_figure(rows)
    if kind == "atf":
        return make_metric_figure(rows, "atf", "average track fit [%]")
    if kind == "cod":
        return make_metric_figure(rows, "cod", "one-step-ahead coefficient of determination [%]")
    raise ValueError(f"unknown figure kind {kind!r}")


def render(spec):
    """Render the figure to disk; overwrites any existing output."""
    fig = make_figure(spec.kind, spec.input_path)
    try:
        fig.savefig(spec.output_path, dpi=150)
    finally:
        plt.close(fig)
    return spec.output_path
