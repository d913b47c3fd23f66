"""Figure rendering for tvarx study outputs.

Consumes the flat study CSV (``run,method,lambda1_opt,lambda2_opt,cod,atf,
failed``) and the kernel comparison CSV (``lambda2,f,g``) written by the
estimation package, and renders the comparison figures as boxplots and
curves. The data contract is the files themselves; this package has no
dependency on the estimation code.
"""

__version__ = "0.1.0"

from .data import SchemaError, load_remark_curve, load_study
from .figures import FIGURE_KINDS, FigureSpec, make_figure, render

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "SchemaError",
    "load_remark_curve",
    "load_study",
    "make_figure",
    "render",
]
