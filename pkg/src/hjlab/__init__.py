"""Desk-scale numerical laboratory for large-time behaviour of unbounded
viscosity solutions of one-dimensional Hamilton-Jacobi equations."""

from .core import Grid1D, SampledFn, Window, interpolate, polynomial_bump, sup_norm_window
from .ergodic import (
    BallProblem,
    ErgodicReport,
    ball_grid,
    constant_profile_residual,
    estimate_lambda_min,
    gradient_interval,
    solve_dirichlet_ball,
)
from .experiments import EXPERIMENT_NAMES, ExperimentReport, Verdict, run_experiment
from .fd_solver import EvolveConfig, EvolveResult, evolve_lf, time_derivative_sup
from .hamiltonians import (
    AbsShift,
    EikonalShift,
    H4Report,
    Hamiltonian,
    LagrangianValue,
    QuadPotential,
    Quadratic,
    ShiftedBy,
    Tabulated,
    check_h4,
    eval_hamiltonian,
    gauge_of_sublevel,
    kruzhkov,
    legendre_transform,
)
from .reporting import (
    report_from_json,
    report_to_json,
    write_report_bundle,
    write_report_json,
    write_series_csv,
)
from .variational import (
    StaircaseSpec,
    TrajectoryResult,
    backtrack_minimizer,
    build_staircase_u0,
    hopf_lax_evaluate,
)

__version__ = "0.1.0"

__all__ = [
    "AbsShift",
    "BallProblem",
    "EXPERIMENT_NAMES",
    "EikonalShift",
    "ErgodicReport",
    "EvolveConfig",
    "EvolveResult",
    "ExperimentReport",
    "Grid1D",
    "H4Report",
    "Hamiltonian",
    "LagrangianValue",
    "QuadPotential",
    "Quadratic",
    "SampledFn",
    "ShiftedBy",
    "StaircaseSpec",
    "Tabulated",
    "TrajectoryResult",
    "Verdict",
    "Window",
    "backtrack_minimizer",
    "ball_grid",
    "build_staircase_u0",
    "check_h4",
    "constant_profile_residual",
    "estimate_lambda_min",
    "eval_hamiltonian",
    "evolve_lf",
    "gauge_of_sublevel",
    "gradient_interval",
    "hopf_lax_evaluate",
    "interpolate",
    "kruzhkov",
    "legendre_transform",
    "polynomial_bump",
    "report_from_json",
    "report_to_json",
    "run_experiment",
    "solve_dirichlet_ball",
    "sup_norm_window",
    "time_derivative_sup",
    "write_report_bundle",
    "write_report_json",
    "write_series_csv",
]
