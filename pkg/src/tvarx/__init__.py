"""Recursive least-squares identification of time-varying ARX models.

The library tracks parameters that drift at different speeds by replacing
the single exponential forgetting factor of classic recursive least squares
with a per-parameter forgetting vector, folded into the recursion through a
kernel-weighted (Hadamard) update of the information matrix. It ships the
recursions, batch cross-check solvers, a synthetic benchmark simulator, the
comparison metrics, a grid-search Monte-Carlo harness and a CLI.
"""

__version__ = "0.1.0"

from .batch import batch_regularized_ls, batch_weighted_ls, optimality_residual
from .config import METHODS, RunConfig, default_grid, parse_config_file
from .estimators import ArxForgettingRegressor
from .exceptions import (
    AllGridPointsFailedError,
    ConfigError,
    MapDegeneracyError,
    RankDeficiencyError,
    SingularInformationError,
    UnstableTrajectoryError,
)
from .forgetting import (
    ForgettingSpec,
    apply_map,
    cs_length_scales,
    kernel_cs,
    kernel_diagonal,
    kernel_tc,
    remark_curve,
    sqrt_cross_reference,
)
from .metrics import atf, cod
from .model import ModelOrders, build_regressor, regressor_matrix, theta_from_polynomials
from .recursions import (
    EstimatorState,
    init_state,
    step_classic,
    step_multi_p_form,
    step_multi_r_form,
    step_vector_forgetting,
)
from .simulate import (
    ArxTrajectory,
    Dataset,
    PolynomialBank,
    butterworth_lowpass,
    default_bank,
    generate_bank,
    generate_dataset,
    generate_stable_polynomial,
    load_dataset,
    save_dataset,
    schedule_trajectory,
    simulate_arx,
)
from .study import (
    EstimationResult,
    StudyRecord,
    StudyReport,
    evaluate_grid,
    grid_search,
    method_spec,
    monte_carlo,
    read_study_csv,
    run_estimation,
    write_study_csv,
    write_summary_json,
)

__all__ = [
    "ArxForgettingRegressor",
    "ArxTrajectory",
    "AllGridPointsFailedError",
    "ConfigError",
    "Dataset",
    "EstimationResult",
    "EstimatorState",
    "ForgettingSpec",
    "MapDegeneracyError",
    "METHODS",
    "ModelOrders",
    "PolynomialBank",
    "RankDeficiencyError",
    "RunConfig",
    "SingularInformationError",
    "StudyRecord",
    "StudyReport",
    "UnstableTrajectoryError",
    "apply_map",
    "atf",
    "batch_regularized_ls",
    "batch_weighted_ls",
    "build_regressor",
    "butterworth_lowpass",
    "cod",
    "cs_length_scales",
    "default_bank",
    "default_grid",
    "evaluate_grid",
    "generate_bank",
    "generate_dataset",
    "generate_stable_polynomial",
    "grid_search",
    "init_state",
    "kernel_cs",
    "kernel_diagonal",
    "kernel_tc",
    "load_dataset",
    "method_spec",
    "monte_carlo",
    "optimality_residual",
    "parse_config_file",
    "read_study_csv",
    "regressor_matrix",
    "remark_curve",
    "run_estimation",
    "save_dataset",
    "schedule_trajectory",
    "simulate_arx",
    "sqrt_cross_reference",
    "step_classic",
    "step_multi_p_form",
    "step_multi_r_form",
    "step_vector_forgetting",
    "theta_from_polynomials",
    "write_study_csv",
    "write_summary_json",
]
