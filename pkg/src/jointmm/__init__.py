"""Solvers for nonsmooth convex-concave minimax problems with joint linear constraints."""

from .errors import (
    ConfigurationError,
    DivergenceError,
    EstimationError,
    FrameworkError,
    JointmmError,
    NumericalError,
    SingularConstraintError,
)
from .numerics import matvec, matvec_t, operator_norm, spd_solve
from .problem import (
    BudgetConstants,
    MinimaxProblem,
    ProblemConstants,
    Residuals,
    compute_budget_constants,
    compute_constants,
    feas,
    grad_x,
    grad_y,
    load_problem_manifest,
    residuals,
)
from .prox import (
    ConeSpec,
    ProxOperator,
    SmoothOracle,
    forward_backward,
    gradient_mapping,
    project_l1cone,
    project_polar,
    project_soc,
    prox_eval,
)
from .solver import (
    IterateState,
    SolveResult,
    SolverConfig,
    TraceRecord,
    inner_ascent,
    outer_step,
    plan_budget,
    project_feasible,
    run_framework,
    run_pgmsad,
)
from .apps import (
    GaveConfig,
    GaveInstance,
    GaveResult,
    GlpeConfig,
    GlpeInstance,
    GlpeResult,
    LinRegInstance,
    builtin_gave,
    builtin_gave_config,
    builtin_glpe,
    gave_to_minimax,
    glpe_to_minimax,
    make_linreg,
    run_gave,
    run_glpe,
    run_linreg,
)

__version__ = "0.1.0"
