"""Shifted Bessel Tau solver for nonlinear ODE boundary value problems.

Typical use::

    from taubessel import build_problem, solve_problem
    problem = build_problem("troesch", n=10)
    report = solve_problem(problem)
    y = problem.expansion(report.state, "y")
"""

from .approx import ProjectionResult, QuadratureNotConverged, error_bound, project_function, project_polynomial
from .basis import BasisSpec, CoeffVec, build_change_matrices, eval_basis, eval_expansion
from .newton import NewtonConfig, NotConverged, SingularJacobian, SolveReport, solve, solve_problem
from .opmat import build_c_tilde, build_opmatrices
from .problems import PROBLEMS, build_problem, reference_tables
from .taucore import (
    BoundaryCondition,
    TauProblem,
    TooManyBCs,
    Unknown,
    known_from,
    known_polynomial,
    residual_at,
    tau_project,
)

__version__ = "0.1.0"

__all__ = [
    "PROBLEMS",
    "BasisSpec",
    "BoundaryCondition",
    "CoeffVec",
    "NewtonConfig",
    "NotConverged",
    "ProjectionResult",
    "QuadratureNotConverged",
    "SingularJacobian",
    "SolveReport",
    "TauProblem",
    "TooManyBCs",
    "Unknown",
    "build_c_tilde",
    "build_change_matrices",
    "build_opmatrices",
    "build_problem",
    "error_bound",
    "eval_basis",
    "eval_expansion",
    "known_from",
    "known_polynomial",
    "project_function",
    "project_polynomial",
    "reference_tables",
    "residual_at",
    "solve",
    "solve_problem",
    "tau_project",
]
