"""Minimax problem model, smoothness/curvature constants, and stationarity residuals.

The problem is

    min_x max_y  phi(x) + g(x) + x^T K y - h(y) - psi(y)
    subject to   A x + B y + c = 0,

with g, h smooth convex, phi, psi proper closed convex accessed through
their prox mappings, and mu >= 0 the strong-convexity modulus of h + psi.
A Lagrange multiplier lambda turns the constraint into the smooth coupling

    f(x, y, lambda) = g(x) + x^T K y - h(y) + <lambda, A x + B y + c>,

and stationarity is certified by three gradient-mapping residuals: the
x-block (prox of phi against grad_x f), the y-block (prox of psi against
grad_y f, ascent sign), and the plain constraint residual.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import matio
from .errors import ConfigurationError, NumericalError
from .numerics import as_matrix, as_vector, operator_norm, spd_factor, spd_solve_factored
from .prox import (
    ProxOperator,
    SmoothOracle,
    cone_from_json,
    prox_blocks,
    prox_eval,
    prox_indicator,
    prox_linear_shift,
    prox_polar_indicator,
    prox_scaled_sq_norm,
    prox_zero,
    smooth_linear,
    smooth_quadratic_diag,
    smooth_scaled_sq_norm,
    smooth_zero,
)


@dataclass
class MinimaxProblem:
    """A full problem instance with oracles, matrices, and the modulus mu.

    Shapes: K is n x m, A is q x n, B is q x m, c has length q. mu may be 0
    only in relaxed mode, where no smoothness constant for the reduced
    objective exists and step sizes must be supplied explicitly.
    """

    g: SmoothOracle
    phi: ProxOperator
    h: SmoothOracle
    psi: ProxOperator
    K: np.ndarray
    A: np.ndarray
    B: np.ndarray
    c: np.ndarray
    mu: float = 0.0

    def __post_init__(self):
        self.K = as_matrix(self.K, "K")
        self.A = as_matrix(self.A, "A")
        self.B = as_matrix(self.B, "B")
        self.c = as_vector(self.c, "c")
        n, m = self.K.shape
        q = self.c.shape[0]
        if self.A.shape != (q, n):
            raise ConfigurationError(
                f"A must be {q}x{n} to match K and c, got {self.A.shape}"
            )
        if self.B.shape != (q, m):
            raise ConfigurationError(
                f"B must be {q}x{m} to match K and c, got {self.B.shape}"
            )
        if self.mu < 0:
            raise ConfigurationError("mu must be >= 0")
        self._gram_factor = None

    @property
    def n(self):
        return self.K.shape[0]

    @property
    def m(self):
        return self.K.shape[1]

    @property
    def q(self):
        return self.c.shape[0]

    def gram_solve(self, r):
        """Solve (A A^T + B B^T) zeta = r, factoring once and caching."""
        if self._gram_factor is None:
            S = self.A @ self.A.T + self.B @ self.B.T
            self._gram_factor = spd_factor(S)
        return spd_solve_factored(self._gram_factor, r)


def grad_x(P: MinimaxProblem, x, y, lam):
    """Gradient of the smooth coupling in x: grad g(x) + K y + A^T lambda."""
    out = P.g.gradient(x) + P.K @ y + P.A.T @ lam
    if not np.all(np.isfinite(out)):
        raise NumericalError("grad_x produced a nonfinite value")
    return out


def grad_y(P: MinimaxProblem, x, y, lam):
    """Gradient of the smooth coupling in y: K^T x + B^T lambda - grad h(y)."""
    out = P.K.T @ x + P.B.T @ lam - P.h.gradient(y)
    if not np.all(np.isfinite(out)):
        raise NumericalError("grad_y produced a nonfinite value")
    return out


def feas(P: MinimaxProblem, x, y):
    """Constraint residual A x + B y + c."""
    return P.A @ x + P.B @ y + P.c


def smooth_coupling(P: MinimaxProblem, x, y, lam):
    """Value of f(x, y, lambda) = g(x) + x^T K y - h(y) + <lambda, Ax + By + c>."""
    return (
        P.g.value(x)
        + float(x @ (P.K @ y))
        - P.h.value(y)
        + float(lam @ feas(P, x, y))
    )


@dataclass(frozen=True)
class Residuals:
    """The three stationarity residuals at scalings (L1, L2)."""

    res_x: float
    res_y: float
    res_feas: float
    L1: float
    L2: float

    def within(self, eps):
        return self.res_x <= eps and self.res_y <= eps and self.res_feas <= eps

    def total(self):
        return self.res_x + self.res_y + self.res_feas


def residuals(P: MinimaxProblem, x, y, lam, L1, L2) -> Residuals:
    """Gradient-mapping residuals certifying (eps-)stationarity.

    res_x = ||L1 (x - prox_{phi/L1}(x - grad_x/L1))||, res_y the same on the
    ascent side (note the + sign: y + grad_y/L2), res_feas = ||Ax + By + c||.
    All three vanish exactly at a stationary triple.
    """
    if L1 <= 0 or L2 <= 0:
        raise ConfigurationError("residual scalings L1, L2 must be positive")
    gx = grad_x(P, x, y, lam)
    gy = grad_y(P, x, y, lam)
    rx = L1 * (x - prox_eval(P.phi, 1.0 / L1, x - gx / L1))
    ry = L2 * (y - prox_eval(P.psi, 1.0 / L2, y + gy / L2))
    return Residuals(
        res_x=float(np.linalg.norm(rx)),
        res_y=float(np.linalg.norm(ry)),
        res_feas=float(np.linalg.norm(feas(P, x, y))),
        L1=float(L1),
        L2=float(L2),
    )


def recover_multiplier(P: MinimaxProblem, x, y):
    """Least-squares multiplier for a (near-)feasible primal pair.

    Minimizes ||grad_x f||^2 + ||grad_y f||^2 over lambda; the normal
    equations share the constraint Gram matrix A A^T + B B^T, so the cached
    factorization is reused. At an exact constrained saddle this returns the
    multiplier that zeroes both gradients.
    """
    gx0 = P.g.gradient(x) + P.K @ y
    gy0 = P.K.T @ x - P.h.gradient(y)
    return -P.gram_solve(P.A @ gx0 + P.B @ gy0)


def inner_residual(P: MinimaxProblem, x, y, lam, L=1.0):
    """Norm of the y-block gradient mapping at scaling L, for fixed (x, lambda).

    This is the quantity an inner maximizer must drive below its target; it
    vanishes exactly at y_*(x, lambda).
    """
    gy = grad_y(P, x, y, lam)
    ry = L * (y - prox_eval(P.psi, 1.0 / L, y + gy / L))
    return float(np.linalg.norm(ry))


@dataclass(frozen=True)
class ProblemConstants:
    """Operator norms and the derived curvature constants."""

    norm_K: float
    norm_A: float
    norm_B: float
    L_g: float
    L_h: float
    gamma: float
    L_theta: Optional[float]


def compute_constants(P: MinimaxProblem, tol=1e-8, max_iter=5000) -> ProblemConstants:
    """Estimate ||K||, ||A||, ||B|| and assemble gamma and L_theta = gamma/mu.

    gamma bounds the Lipschitz modulus of the gradient of the reduced
    objective theta(x, lambda); it is finite for any data, but L_theta needs
    mu > 0 and is reported absent in relaxed mode.
    """
    nK = operator_norm(P.K, tol, max_iter)
    nA = operator_norm(P.A, tol, max_iter)
    nB = operator_norm(P.B, tol, max_iter)
    Lg = P.g.lipschitz
    mu = P.mu
    gamma = max(
        math.sqrt(2.0 * (Lg * mu + nK**2) ** 2 + 2.0 * (nA * mu + nK * nB) ** 2),
        math.sqrt(2.0 * (mu * nA + nK * nB) ** 2 + 2.0 * nB**4),
    )
    L_theta = gamma / mu if mu > 0 else None
    return ProblemConstants(
        norm_K=nK,
        norm_A=nA,
        norm_B=nB,
        L_g=Lg,
        L_h=P.h.lipschitz,
        gamma=gamma,
        L_theta=L_theta,
    )


@dataclass(frozen=True)
class BudgetConstants:
    """Constants feeding the inner/outer iteration budget.

    beta1 (domain radius of psi), omega1 (uniform gap bound), and theta_gap
    (upper bound on the initial reduced-objective gap) are user-supplied;
    the budget planner needs theta_gap and exactly one of beta1/omega1.
    """

    chi0: float
    chi1: float
    omega_x: float
    omega_y: float
    gamma1: float
    gamma2: float
    beta1: Optional[float] = None
    omega1: Optional[float] = None
    theta_gap: Optional[float] = None

    def with_bounds(self, beta1=None, omega1=None, theta_gap=None):
        return replace(self, beta1=beta1, omega1=omega1, theta_gap=theta_gap)


def compute_budget_constants(
    P: MinimaxProblem, C: ProblemConstants, alpha_x: float, alpha_y: float
) -> BudgetConstants:
    """Assemble chi0, chi1, omega_x, omega_y, gamma1, gamma2 for given step sizes.

    Requires mu > 0 (so L_theta exists), 0 < alpha_x < 1/L_theta, and
    0 < alpha_y < 1/L_h. ||B|| must be nonzero because the y-side constants
    scale with mu^2 / ||B||^2.
    """
    if C.L_theta is None:
        raise ConfigurationError("budget constants need mu > 0 (L_theta undefined in relaxed mode)")
    if not (0 < alpha_x < 1.0 / C.L_theta):
        raise ConfigurationError(
            f"alpha_x must lie in (0, 1/L_theta) = (0, {1.0 / C.L_theta:.6g}), got {alpha_x}"
        )
    if C.L_h > 0 and not (0 < alpha_y < 1.0 / C.L_h):
        raise ConfigurationError(
            f"alpha_y must lie in (0, 1/L_h) = (0, {1.0 / C.L_h:.6g}), got {alpha_y}"
        )
    if alpha_y <= 0:
        raise ConfigurationError("alpha_y must be positive")
    if C.norm_B == 0:
        raise ConfigurationError("budget constants need B nonzero")

    mu = P.mu
    Lg = C.L_g
    shrink = 1.0 - alpha_x * C.L_theta
    chi0 = 1.0 / (alpha_x * shrink)
    chi1 = (C.norm_K**2 + C.norm_B**2) / shrink**2

    S = P.A @ P.A.T + P.B @ P.B.T
    S_inv = np.linalg.inv(S)
    norm_At_Sinv = operator_norm(P.A.T @ S_inv)
    norm_Bt_Sinv = operator_norm(P.B.T @ S_inv)
    omega_y = (Lg + 2.0 / alpha_y) * norm_At_Sinv + C.norm_K * norm_Bt_Sinv
    omega_x = (Lg + 2.0 / alpha_x) * norm_At_Sinv + C.norm_K * norm_Bt_Sinv

    ratio = mu**2 / C.norm_B**2
    gamma1 = max(
        6.0 * (9.0 / alpha_y**2 + 2.0 * ratio * chi1 + 4.0 * chi1 * omega_y**2),
        8.0 * chi1 * ((1.0 + alpha_x * Lg) ** 2 + 3.0 * omega_x**2),
    )
    gamma2 = max(
        12.0 * chi0 * (ratio + 2.0 * omega_y**2),
        8.0 * chi0 * ((1.0 + alpha_x * Lg) ** 2 + 3.0 * omega_x**2),
    )
    return BudgetConstants(
        chi0=chi0,
        chi1=chi1,
        omega_x=omega_x,
        omega_y=omega_y,
        gamma1=gamma1,
        gamma2=gamma2,
    )


# registry of smooth terms available in problem manifests
def smooth_term_from_json(data: dict) -> SmoothOracle:
    kind = data["kind"]
    if kind == "zero":
        return smooth_zero()
    if kind == "scaled_sq_norm":
        return smooth_scaled_sq_norm(float(data["c"]))
    if kind == "linear":
        return smooth_linear(np.asarray(data["b"], dtype=float))
    if kind == "quadratic_diag":
        return smooth_quadratic_diag(np.asarray(data["d"], dtype=float))
    raise ConfigurationError(f"unknown smooth term kind {kind!r}")


def prox_term_from_json(data: dict) -> ProxOperator:
    kind = data["kind"]
    if kind == "zero_function":
        return prox_zero()
    if kind == "indicator":
        return prox_indicator(cone_from_json(data["cone"]))
    if kind == "polar_indicator":
        return prox_polar_indicator(cone_from_json(data["cone"]))
    if kind == "scaled_sq_norm":
        return prox_scaled_sq_norm(float(data["c"]))
    if kind == "linear_shift":
        return prox_linear_shift(np.asarray(data["v"], dtype=float))
    if kind == "blocks":
        return prox_blocks(
            [(prox_term_from_json(b["op"]), int(b["dim"])) for b in data["blocks"]]
        )
    raise ConfigurationError(f"unknown prox operator kind {kind!r}")


def _load_matrix_field(value, base_dir):
    if isinstance(value, str):
        path = value if os.path.isabs(value) else os.path.join(base_dir, value)
        return matio.read_matrix(path)
    return np.asarray(value, dtype=float)


def load_problem_manifest(path) -> MinimaxProblem:
    """Build a MinimaxProblem from a JSON manifest.

    Matrix fields (K, A, B) may be inline nested lists or paths to CSV /
    MatrixMarket files, resolved relative to the manifest. The vector c may
    be inline or a single-column matrix file. Smooth terms come from the
    {zero, scaled_sq_norm, linear, quadratic_diag} registry and nonsmooth
    terms from the ProxOperator kinds.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    base_dir = os.path.dirname(os.path.abspath(path))
    try:
        K = _load_matrix_field(data["K"], base_dir)
        A = _load_matrix_field(data["A"], base_dir)
        B = _load_matrix_field(data["B"], base_dir)
        c = data["c"]
        if isinstance(c, str):
            c = _load_matrix_field(c, base_dir).reshape(-1)
        c = np.asarray(c, dtype=float)
        return MinimaxProblem(
            g=smooth_term_from_json(data["g"]),
            phi=prox_term_from_json(data["phi"]),
            h=smooth_term_from_json(data["h"]),
            psi=prox_term_from_json(data["psi"]),
            K=K,
            A=A,
            B=B,
            c=c,
            mu=float(data.get("mu", 0.0)),
        )
    except KeyError as exc:
        raise ConfigurationError(f"problem manifest missing field {exc.args[0]!r}") from exc
