"""Solver loops: multi-step ascent-descent, the generic alternating framework,
the feasibility projection, and the inner/outer budget planner.

The main entry point is run_pgmsad: N proximal-ascent steps in y per outer
iteration, then one proximal-descent step in (x, lambda). The lambda update
uses the old x, exactly as the method is defined. run_framework is the same
outer loop with the inner maximization delegated to a caller-supplied solver
that must meet a per-iteration accuracy target.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DivergenceError, FrameworkError, NumericalError
from .problem import (
    BudgetConstants,
    MinimaxProblem,
    ProblemConstants,
    Residuals,
    feas,
    grad_x,
    inner_residual,
    residuals,
)
from .prox import prox_eval
from .rng import standard_normal

TRACE_HEADER = "t,elapsed_s,res_x,res_y,res_feas,app_error"


@dataclass(frozen=True)
class TraceRecord:
    """One per-iteration trace row."""

    t: int
    elapsed: float
    res_x: float
    res_y: float
    res_feas: float
    objective_metric: Optional[float] = None


@dataclass
class IterateState:
    """Current iterate (x, y, lambda) after t outer iterations."""

    x: np.ndarray
    y: np.ndarray
    lam: np.ndarray
    t: int


@dataclass
class SolverConfig:
    """Step sizes, loop counts, and termination settings for run_pgmsad.

    alpha_y_schedule and inner_schedule optionally override alpha_y / N per
    outer iteration; the default is the constant choice. project_final
    applies the feasibility projection once to the returned point (after at
    least one iteration ran); project_each_outer applies it every iteration.
    """

    alpha_x: float
    alpha_y: float
    inner_steps: int
    outer_cap: int
    eps: float = 0.0
    project_each_outer: bool = False
    project_final: bool = True
    record_trace: bool = True
    seed: int = 0
    x0: Optional[np.ndarray] = None
    y0: Optional[np.ndarray] = None
    lambda0: Optional[np.ndarray] = None
    alpha_y_schedule: Optional[Callable[[int], float]] = None
    inner_schedule: Optional[Callable[[int], int]] = None

    def __post_init__(self):
        if self.alpha_x <= 0 or self.alpha_y <= 0:
            raise ConfigurationError("step sizes alpha_x, alpha_y must be positive")
        if self.inner_steps < 0 or self.outer_cap < 0:
            raise ConfigurationError("inner_steps and outer_cap must be nonnegative")


class SolveResult(NamedTuple):
    state: IterateState
    trace: list
    residuals: Residuals
    converged: bool


class FrameworkResult(NamedTuple):
    state: IterateState
    trace: list
    eps_used: list


def _check_finite(vec, what, alpha=None):
    if not np.all(np.isfinite(vec)):
        detail = f" (step size {alpha})" if alpha is not None else ""
        raise DivergenceError(f"{what} became nonfinite{detail}")


def inner_ascent(P: MinimaxProblem, x, lam, y0, n_steps, alpha_y):
    """Run n_steps proximal gradient-ascent steps on y for fixed (x, lambda).

    y <- prox_{alpha_y psi}[y + alpha_y (-grad h(y) + K^T x + B^T lambda)].
    For mu-strongly concave inner problems and alpha_y < 1/L_h each step
    contracts the squared distance to y_*(x, lambda) by (1 - mu alpha_y).
    """
    if n_steps < 0:
        raise ConfigurationError("inner_ascent needs n_steps >= 0")
    drive = P.K.T @ x + P.B.T @ lam
    y = np.asarray(y0, dtype=np.float64).copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            y = prox_eval(P.psi, alpha_y, y + alpha_y * (drive - P.h.gradient(y)))
            if not np.all(np.isfinite(y)):
                raise DivergenceError(
                    f"inner ascent iterate became nonfinite (step size alpha_y={alpha_y})"
                )
    return y


def approx_y_star(P: MinimaxProblem, x, lam, alpha_y, tol=1e-12, max_iter=200000):
    """Approximate y_*(x, lambda) by running the inner ascent until the
    y-block gradient mapping at scaling 1/alpha_y drops below tol."""
    y = np.zeros(P.m)
    for _ in range(max_iter):
        y_next = inner_ascent(P, x, lam, y, 1, alpha_y)
        if np.linalg.norm(y_next - y) / alpha_y <= tol:
            return y_next
        y = y_next
    return y


def outer_step(P: MinimaxProblem, x, lam, y_next, alpha_x):
    """One proximal-descent step in (x, lambda) given the updated y.

    x+ = prox_{alpha_x phi}[x - alpha_x (grad g(x) + K y+ + A^T lambda)],
    lambda+ = lambda - alpha_x [A x + B y+ + c]  (old x, by definition).
    """
    if alpha_x <= 0:
        raise ConfigurationError("outer_step needs alpha_x > 0")
    with np.errstate(over="ignore", invalid="ignore"):
        gx = grad_x(P, x, y_next, lam)
        x_next = prox_eval(P.phi, alpha_x, x - alpha_x * gx)
        lam_next = lam - alpha_x * feas(P, x, y_next)
    _check_finite(x_next, "outer x iterate", alpha_x)
    _check_finite(lam_next, "outer lambda iterate", alpha_x)
    return x_next, lam_next


def project_feasible(P: MinimaxProblem, x, y):
    """Euclidean projection of (x, y) onto {(x, y): A x + B y + c = 0}.

    zeta = (A A^T + B B^T)^{-1} (A x + B y + c), then subtract
    (A^T zeta, B^T zeta). The Gram factorization is cached on the problem.
    """
    zeta = P.gram_solve(feas(P, x, y))
    return x - P.A.T @ zeta, y - P.B.T @ zeta


def _init_points(P: MinimaxProblem, config: SolverConfig):
    rng = np.random.Generator(np.random.PCG64(config.seed))
    x = (
        np.asarray(config.x0, dtype=np.float64).copy()
        if config.x0 is not None
        else standard_normal(rng, P.n)
    )
    y = (
        np.asarray(config.y0, dtype=np.float64).copy()
        if config.y0 is not None
        else standard_normal(rng, P.m)
    )
    lam = (
        np.asarray(config.lambda0, dtype=np.float64).copy()
        if config.lambda0 is not None
        else np.zeros(P.q)
    )
    if x.shape != (P.n,) or y.shape != (P.m,) or lam.shape != (P.q,):
        raise ConfigurationError("initial point dimensions do not match the problem")
    return x, y, lam


def run_pgmsad(P: MinimaxProblem, config: SolverConfig, app_metric=None) -> SolveResult:
    """Run the multi-step ascent-descent loop until eps-stationarity or the cap.

    Stops early once all three residuals at scalings (1/alpha_x, 1/alpha_y)
    are <= config.eps. app_metric, if given, is called as
    app_metric(x, y, lam) and recorded in the trace's last column.

    Returns (state, trace, residuals, converged). Deterministic for a fixed
    config and initial point (trace timestamps aside).
    """
    x, y, lam = _init_points(P, config)
    L1 = 1.0 / config.alpha_x
    L2 = 1.0 / config.alpha_y
    trace = []
    start = time.perf_counter()

    def record(t, res):
        if config.record_trace:
            trace.append(
                TraceRecord(
                    t=t,
                    elapsed=time.perf_counter() - start,
                    res_x=res.res_x,
                    res_y=res.res_y,
                    res_feas=res.res_feas,
                    objective_metric=(
                        float(app_metric(x, y, lam)) if app_metric is not None else None
                    ),
                )
            )

    res = residuals(P, x, y, lam, L1, L2)
    record(0, res)
    converged = res.within(config.eps)
    t_done = 0
    if not converged:
        for t in range(config.outer_cap):
            alpha_y_t = (
                config.alpha_y_schedule(t) if config.alpha_y_schedule else config.alpha_y
            )
            n_t = config.inner_schedule(t) if config.inner_schedule else config.inner_steps
            try:
                y = inner_ascent(P, x, lam, y, n_t, alpha_y_t)
                x, lam = outer_step(P, x, lam, y, config.alpha_x)
            except DivergenceError as exc:
                exc.state = IterateState(x=x, y=y, lam=lam, t=t)
                exc.trace = trace
                raise
            except NumericalError as exc:
                raise DivergenceError(
                    f"iteration {t} produced a nonfinite value: {exc}",
                    state=IterateState(x=x, y=y, lam=lam, t=t),
                    trace=trace,
                ) from exc
            if config.project_each_outer:
                x, y = project_feasible(P, x, y)
            t_done = t + 1
            res = residuals(P, x, y, lam, L1, L2)
            record(t_done, res)
            if res.within(config.eps):
                converged = True
                break
    if t_done > 0 and config.project_final and not config.project_each_outer:
        x, y = project_feasible(P, x, y)
        res = residuals(P, x, y, lam, L1, L2)
    state = IterateState(x=x, y=y, lam=lam, t=t_done)
    return SolveResult(state=state, trace=trace, residuals=res, converged=converged)


def run_framework(
    P: MinimaxProblem,
    inner: Callable,
    eps_schedule,
    alpha_x: float,
    T: int,
    x0=None,
    y0=None,
    lambda0=None,
    seed: int = 0,
    check_atol: float = 1e-9,
) -> FrameworkResult:
    """Alternating-coordinate framework with a delegated inner maximizer.

    inner(x, lam, y_start, eps_t) must return y+ with the y-block gradient
    mapping at unit scaling below eps_t (checked here, with absolute slack
    check_atol for exact maximizers supplied with eps_t = 0), and should not
    move y away from y_*(x, lambda). eps_schedule is a callable t -> eps_t
    or a sequence; square-summable schedules are what the convergence theory
    asks for, so a constant schedule only triggers a warning.
    """
    if T < 0:
        raise ConfigurationError("run_framework needs T >= 0")
    if callable(eps_schedule):
        eps_fn = eps_schedule
    else:
        sched = list(map(float, eps_schedule))
        if len(sched) < T:
            raise ConfigurationError(f"eps schedule has {len(sched)} entries, need {T}")
        if len(set(sched)) == 1 and T > 1:
            warnings.warn(
                "constant inner-accuracy schedule: the square-summability "
                "hypothesis behind convergence does not hold",
                stacklevel=2,
            )
        eps_fn = lambda t: sched[t]

    config = SolverConfig(
        alpha_x=alpha_x,
        alpha_y=1.0,
        inner_steps=0,
        outer_cap=0,
        seed=seed,
        x0=x0,
        y0=y0,
        lambda0=lambda0,
    )
    x, y, lam = _init_points(P, config)
    trace = []
    eps_used = []
    start = time.perf_counter()
    for t in range(T):
        eps_t = float(eps_fn(t))
        y = np.asarray(inner(x, lam, y, eps_t), dtype=np.float64)
        achieved = inner_residual(P, x, y, lam, L=1.0)
        if achieved > eps_t + check_atol:
            raise FrameworkError(
                f"inner solver missed its target at iteration {t}: "
                f"residual {achieved:.3e} > eps_t {eps_t:.3e}",
                iteration=t,
            )
        x, lam = outer_step(P, x, lam, y, alpha_x)
        eps_used.append(eps_t)
        res = residuals(P, x, y, lam, 1.0 / alpha_x, 1.0)
        trace.append(
            TraceRecord(
                t=t + 1,
                elapsed=time.perf_counter() - start,
                res_x=res.res_x,
                res_y=res.res_y,
                res_feas=res.res_feas,
            )
        )
    return FrameworkResult(
        state=IterateState(x=x, y=y, lam=lam, t=T), trace=trace, eps_used=eps_used
    )


def plan_budget(
    C: ProblemConstants,
    B: BudgetConstants,
    alpha_x: float,
    alpha_y: float,
    mu: float,
    eps: float,
):
    """Inner/outer iteration counts (N, T) guaranteeing an eps-stationary point.

    With a bounded domain radius beta1:
        N = ceil[(log(8 gamma1 beta1^2) + 2 log(1/eps)) / (-log(1 - mu alpha_y))],
    or with a uniform gap bound omega1:
        N = ceil[(log(4 gamma1 omega1 / mu) + 2 log(1/eps)) / (-log(1 - mu alpha_y))],
    and in both cases T = ceil(2 gamma2 theta_gap / eps^2). Both are clamped
    to at least 1. Exactly one of beta1/omega1 and a theta_gap are required.
    """
    if mu <= 0:
        raise ConfigurationError("plan_budget needs mu > 0")
    if eps <= 0:
        raise ConfigurationError("plan_budget needs eps > 0")
    if C.L_theta is not None and not (0 < alpha_x < 1.0 / C.L_theta):
        raise ConfigurationError(
            f"alpha_x must lie in (0, 1/L_theta) = (0, {1.0 / C.L_theta:.6g}), got {alpha_x}"
        )
    if C.L_h > 0 and not (0 < alpha_y < 1.0 / C.L_h):
        raise ConfigurationError(
            f"alpha_y must lie in (0, 1/L_h) = (0, {1.0 / C.L_h:.6g}), got {alpha_y}"
        )
    if not (0 < mu * alpha_y < 1):
        raise ConfigurationError("plan_budget needs mu * alpha_y in (0, 1)")
    if B.theta_gap is None:
        raise ConfigurationError("plan_budget needs theta_gap (initial gap upper bound)")
    if (B.beta1 is None) == (B.omega1 is None):
        raise ConfigurationError("plan_budget needs exactly one of beta1 / omega1")

    rate = -math.log(1.0 - mu * alpha_y)
    if B.beta1 is not None:
        numer = math.log(8.0 * B.gamma1 * B.beta1**2) + 2.0 * math.log(1.0 / eps)
    else:
        numer = math.log(4.0 * B.gamma1 * B.omega1 / mu) + 2.0 * math.log(1.0 / eps)
    N = max(1, math.ceil(numer / rate))
    T = max(1, math.ceil(2.0 * B.gamma2 * B.theta_gap / eps**2))
    return N, T


def write_trace_csv(trace: Sequence[TraceRecord], path):
    """Write a trace with the frozen header t,elapsed_s,res_x,res_y,res_feas,app_error."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(TRACE_HEADER + "\n")
        for rec in trace:
            app = "" if rec.objective_metric is None else repr(float(rec.objective_metric))
            fh.write(
                f"{rec.t},{rec.elapsed:.6f},{rec.res_x!r},{rec.res_y!r},{rec.res_feas!r},{app}\n"
            )


def state_to_json(state: IterateState, res: Residuals, wall_time_s: float) -> dict:
    return {
        "x": [float(v) for v in state.x],
        "y": [float(v) for v in state.y],
        "lambda": [float(v) for v in state.lam],
        "residuals": {
            "res_x": res.res_x,
            "res_y": res.res_y,
            "res_feas": res.res_feas,
            "L1": res.L1,
            "L2": res.L2,
        },
        "iterations": state.t,
        "wall_time_s": wall_time_s,
    }


def write_state_json(state: IterateState, res: Residuals, wall_time_s: float, path):
    with open(path, "w", encoding="ascii") as fh:
        json.dump(state_to_json(state, res, wall_time_s), fh, indent=2)
        fh.write("\n")
