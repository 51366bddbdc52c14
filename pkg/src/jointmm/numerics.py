"""Dense vector/matrix kernels: matvecs, SPD solves, operator-norm estimation.

Everything here works on float64 numpy arrays. Vectors are 1-d arrays,
matrices 2-d row-major arrays. All functions are pure; nothing is mutated.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, EstimationError, SingularConstraintError

DEFAULT_NORM_TOL = 1e-8
DEFAULT_NORM_MAX_ITER = 5000


def as_vector(v, name="vector"):
    """Validate and convert to a finite 1-d float64 array."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigurationError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} contains nonfinite entries")
    return arr


def as_matrix(m, name="matrix"):
    """Validate and convert to a finite 2-d float64 array."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise ConfigurationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} contains nonfinite entries")
    return arr


def matvec(M, v):
    """Return M @ v, checking M.cols == len(v)."""
    if M.shape[1] != v.shape[0]:
        raise ConfigurationError(
            f"matvec dimension mismatch: matrix is {M.shape[0]}x{M.shape[1]}, "
            f"vector has length {v.shape[0]}"
        )
    return M @ v


def matvec_t(M, v):
    """Return M.T @ v, checking M.rows == len(v)."""
    if M.shape[0] != v.shape[0]:
        raise ConfigurationError(
            f"matvec_t dimension mismatch: matrix is {M.shape[0]}x{M.shape[1]}, "
            f"vector has length {v.shape[0]}"
        )
    return M.T @ v


def spd_factor(S):
    """Cholesky factor of a symmetric positive definite matrix.

    Returns the lower-triangular L with S = L @ L.T. A non-positive pivot
    means [A B] is rank deficient (the Gram matrix A A^T + B B^T of a
    full-row-rank stacked constraint matrix is always positive definite).
    """
    if S.shape[0] != S.shape[1]:
        raise ConfigurationError(f"spd_factor needs a square matrix, got {S.shape}")
    try:
        return np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise SingularConstraintError(
            "constraint Gram matrix is not positive definite; "
            "the stacked constraint matrix [A B] must have full row rank"
        ) from exc


def spd_solve_factored(L, r):
    """Solve (L L^T) zeta = r given a cached Cholesky factor L."""
    y = np.linalg.solve(L, r)
    return np.linalg.solve(L.T, y)


def spd_solve(S, r):
    """Solve S zeta = r for symmetric positive definite S by direct factorization."""
    if S.shape[0] != r.shape[0]:
        raise ConfigurationError(
            f"spd_solve dimension mismatch: matrix is {S.shape[0]}x{S.shape[1]}, "
            f"right-hand side has length {r.shape[0]}"
        )
    return spd_solve_factored(spd_factor(S), r)


def _power_iteration(M, tol, max_iter):
    """Power iteration on M^T M from the normalized all-ones start.

    Returns (sigma, v) where sigma estimates the largest singular value and
    v is the final right singular vector iterate. Deterministic.
    """
    n = M.shape[1]
    v = np.ones(n) / np.sqrt(n)
    sigma = float(np.linalg.norm(M @ v))
    if sigma == 0.0:
        # all-ones start is in the null space; fall back to coordinate starts
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            if np.linalg.norm(M @ e) > 0:
                v = e
                sigma = float(np.linalg.norm(M @ e))
                break
        else:
            return 0.0, v
    for _ in range(max_iter):
        w = M.T @ (M @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0, v
        v = w / norm_w
        sigma_new = float(np.linalg.norm(M @ v))
        if abs(sigma_new - sigma) <= tol * max(sigma_new, np.finfo(float).tiny):
            return sigma_new, v
        sigma = sigma_new
    raise EstimationError(
        f"operator norm estimate did not converge within {max_iter} iterations "
        f"(last estimate {sigma})",
        last_estimate=sigma,
    )


def operator_norm(M, tol=DEFAULT_NORM_TOL, max_iter=DEFAULT_NORM_MAX_ITER):
    """Largest singular value of M by deterministic power iteration.

    Returns 0.0 for the all-zero matrix. The relative accuracy is tol; the
    start vector is the normalized all-ones vector so repeated calls give
    identical results.
    """
    if tol <= 0:
        raise ConfigurationError("operator_norm tolerance must be positive")
    if not np.any(M):
        return 0.0
    sigma, _ = _power_iteration(M, tol, max_iter)
    return sigma
