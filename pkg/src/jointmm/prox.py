"""Proximal operators, cone projections, and the forward-backward machinery.

The central objects are ConeSpec (a named cone or box with a closed-form
Euclidean projection), ProxOperator (a nonsmooth convex term accessed only
through its proximal mapping), and SmoothOracle (a smooth term carrying its
own gradient and Lipschitz constant). On top of those sit the
forward-backward point T_L and the gradient mapping G_L that every solver
loop and every stationarity residual is built from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, NumericalError

# cone kinds
FREE = "free"
ZERO = "zero"
NONNEG_ORTHANT = "nonneg_orthant"
SECOND_ORDER = "second_order"
L1_NORM = "l1_norm"
BOX = "box"

_CONE_KINDS = (FREE, ZERO, NONNEG_ORTHANT, SECOND_ORDER, L1_NORM, BOX)


@dataclass(frozen=True)
class ConeSpec:
    """A named cone (or box) of a fixed dimension."""

    kind: str
    dim: int
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in _CONE_KINDS:
            raise ConfigurationError(f"unknown cone kind {self.kind!r}")
        if self.dim < 1:
            raise ConfigurationError("cone dimension must be at least 1")
        if self.kind in (SECOND_ORDER, L1_NORM) and self.dim < 2:
            raise ConfigurationError(f"{self.kind} cone needs dimension >= 2")
        if self.kind == BOX:
            if self.lower is None or self.upper is None:
                raise ConfigurationError("box needs lower and upper bounds")
            lo = np.asarray(self.lower, dtype=np.float64)
            hi = np.asarray(self.upper, dtype=np.float64)
            if lo.shape != (self.dim,) or hi.shape != (self.dim,):
                raise ConfigurationError("box bounds must match the box dimension")
            if np.any(lo > hi):
                raise ConfigurationError("box needs lower <= upper entrywise")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)

    def is_cone(self):
        return self.kind != BOX


def cone_to_json(cone: ConeSpec) -> dict:
    out = {"kind": cone.kind, "dim": cone.dim}
    if cone.kind == BOX:
        out["lower"] = list(map(float, cone.lower))
        out["upper"] = list(map(float, cone.upper))
    return out


def cone_from_json(data: dict) -> ConeSpec:
    return ConeSpec(
        kind=data["kind"],
        dim=int(data["dim"]),
        lower=np.asarray(data["lower"], dtype=float) if "lower" in data else None,
        upper=np.asarray(data["upper"], dtype=float) if "upper" in data else None,
    )


def project_soc(z):
    """Project onto the second-order cone {(s0, s): ||s|| <= s0}.

    Standard three-case closed form: inside stays put, the polar collapses
    to the origin, and everything else lands on the boundary ray.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] < 2:
        raise ConfigurationError("second-order cone projection needs dimension >= 2")
    s0 = z[0]
    tail = z[1:]
    r = np.linalg.norm(tail)
    if r <= s0:
        return z.copy()
    if r <= -s0:
        return np.zeros_like(z)
    alpha = 0.5 * (s0 + r)
    out = np.empty_like(z)
    out[0] = alpha
    out[1:] = (alpha / r) * tail
    return out


def _project_linf_cone(z):
    """Project onto {(t0, t): ||t||_inf <= t0} by a sort-and-threshold search.

    For fixed t0 the tail projection is a clamp, so the objective reduces to
    a piecewise-quadratic scalar problem in t0 whose breakpoints are the
    sorted tail magnitudes.
    """
    a0 = z[0]
    tail = z[1:]
    mags = np.abs(tail)
    if mags.max(initial=0.0) <= a0:
        return z.copy()
    if mags.sum() <= -a0:
        return np.zeros_like(z)
    # stationarity of (t0-a0)^2 + sum((|a_i|-t0)_+^2): t0 = (a0 + sum of active mags)/(1+count)
    d = np.sort(mags)[::-1]
    csum = np.cumsum(d)
    t0 = a0  # no active terms; only valid if a0 >= d[0], excluded above
    for k in range(1, d.shape[0] + 1):
        cand = (a0 + csum[k - 1]) / (1.0 + k)
        below = d[k] if k < d.shape[0] else -np.inf
        if below <= cand < d[k - 1]:
            t0 = cand
            break
    else:
        t0 = (a0 + csum[-1]) / (1.0 + d.shape[0])
    t0 = max(t0, 0.0)
    out = np.empty_like(z)
    out[0] = t0
    out[1:] = np.clip(tail, -t0, t0)
    return out


def project_l1cone(z):
    """Project onto the 1-norm cone {(s0, s): ||s||_1 <= s0}.

    Goes through the Moreau decomposition against the polar cone, which is a
    reflected infinity-norm cone, so the whole thing is exact up to sorting.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] < 2:
        raise ConfigurationError("1-norm cone projection needs dimension >= 2")
    s0 = z[0]
    tail = z[1:]
    if np.abs(tail).sum() <= s0:
        return z.copy()
    # polar of the 1-norm cone is -K_inf; P_K(z) = z - P_{K_polar}(z) = z + P_{K_inf}(-z)
    return z + _project_linf_cone(-z)


def project_cone(cone: ConeSpec, z):
    """Euclidean projection onto the cone or box described by cone."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] != cone.dim:
        raise ConfigurationError(
            f"projection dimension mismatch: cone has dim {cone.dim}, point has {z.shape[0]}"
        )
    if cone.kind == FREE:
        return z.copy()
    if cone.kind == ZERO:
        return np.zeros_like(z)
    if cone.kind == NONNEG_ORTHANT:
        return np.maximum(z, 0.0)
    if cone.kind == SECOND_ORDER:
        return project_soc(z)
    if cone.kind == L1_NORM:
        return project_l1cone(z)
    if cone.kind == BOX:
        return np.clip(z, cone.lower, cone.upper)
    raise ConfigurationError(f"unknown cone kind {cone.kind!r}")


def project_polar(cone: ConeSpec, z):
    """Projection onto the polar cone via the Moreau decomposition z = P_K(z) + P_Kpolar(z)."""
    if not cone.is_cone():
        raise ConfigurationError("boxes have no polar cone; project_polar needs a cone kind")
    z = np.asarray(z, dtype=np.float64)
    return z - project_cone(cone, z)


def in_cone(cone: ConeSpec, z, tol=1e-10):
    """Membership test: distance from z to the cone is at most tol."""
    return bool(np.linalg.norm(np.asarray(z, dtype=float) - project_cone(cone, z)) <= tol)


def _soc_jacobian(z):
    s0 = z[0]
    tail = z[1:]
    r = np.linalg.norm(tail)
    d = z.shape[0]
    if r <= s0:
        return np.eye(d)
    if r <= -s0:
        return np.zeros((d, d))
    u = tail / r
    D = np.empty((d, d))
    D[0, 0] = 0.5
    D[0, 1:] = 0.5 * u
    D[1:, 0] = 0.5 * u
    D[1:, 1:] = ((s0 + r) / (2.0 * r)) * (np.eye(d - 1) - np.outer(u, u)) + 0.5 * np.outer(u, u)
    return D


def _linf_cone_jacobian(z):
    a0 = z[0]
    tail = z[1:]
    d = z.shape[0]
    mags = np.abs(tail)
    if mags.max(initial=0.0) <= a0:
        return np.eye(d)
    if mags.sum() <= -a0:
        return np.zeros((d, d))
    p = _project_linf_cone(z)
    t0 = p[0]
    active = mags > t0
    k = int(active.sum())
    grad_t0 = np.zeros(d)
    grad_t0[0] = 1.0 / (1.0 + k)
    grad_t0[1:][active] = np.sign(tail[active]) / (1.0 + k)
    D = np.zeros((d, d))
    D[0, :] = grad_t0
    for i in range(d - 1):
        if active[i]:
            D[1 + i, :] = np.sign(tail[i]) * grad_t0
        else:
            D[1 + i, 1 + i] = 1.0
    return D


def projection_jacobian(cone: ConeSpec, z):
    """Derivative of the cone/box projection at z (a subgradient choice on
    the measure-zero piece boundaries). Projections here are piecewise
    smooth, so away from breakpoints P(z + tv) = P(z) + t D v exactly for
    the polyhedral cones and to first order for the second-order cone."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[0] != cone.dim:
        raise ConfigurationError(
            f"jacobian dimension mismatch: cone has dim {cone.dim}, point has {z.shape[0]}"
        )
    if cone.kind == FREE:
        return np.eye(cone.dim)
    if cone.kind == ZERO:
        return np.zeros((cone.dim, cone.dim))
    if cone.kind == NONNEG_ORTHANT:
        return np.diag((z > 0).astype(np.float64))
    if cone.kind == BOX:
        inside = (z > cone.lower) & (z < cone.upper)
        return np.diag(inside.astype(np.float64))
    if cone.kind == SECOND_ORDER:
        return _soc_jacobian(z)
    if cone.kind == L1_NORM:
        # P(z) = z + P_linf(-z), so D = I - D_linf(-z)
        return np.eye(cone.dim) - _linf_cone_jacobian(-z)
    raise ConfigurationError(f"unknown cone kind {cone.kind!r}")


# prox operator kinds
PROX_ZERO = "zero_function"
PROX_INDICATOR = "indicator"
PROX_POLAR_INDICATOR = "polar_indicator"
PROX_SCALED_SQ_NORM = "scaled_sq_norm"
PROX_LINEAR_SHIFT = "linear_shift"
PROX_BLOCKS = "blocks"


@dataclass(frozen=True)
class ProxOperator:
    """A nonsmooth convex term represented by its proximal mapping.

    kind selects among: the zero function, a cone/box indicator, the scaled
    squared norm (coeff/2)||.||^2, a linear term <shift, .>, or a separable
    composition of blocks.
    """

    kind: str
    cone: Optional[ConeSpec] = None
    coeff: float = 0.0
    shift: Optional[np.ndarray] = None
    blocks: tuple = field(default=())

    def block_dims(self):
        return tuple(dim for _, dim in self.blocks)


def prox_zero() -> ProxOperator:
    return ProxOperator(kind=PROX_ZERO)


def prox_indicator(cone: ConeSpec) -> ProxOperator:
    return ProxOperator(kind=PROX_INDICATOR, cone=cone)


def prox_polar_indicator(cone: ConeSpec) -> ProxOperator:
    """Indicator of the polar of cone; its prox is the polar projection."""
    if not cone.is_cone():
        raise ConfigurationError("polar indicator needs a cone kind, not a box")
    return ProxOperator(kind=PROX_POLAR_INDICATOR, cone=cone)


def prox_scaled_sq_norm(coeff: float) -> ProxOperator:
    if coeff < 0:
        raise ConfigurationError("scaled_sq_norm coefficient must be >= 0")
    return ProxOperator(kind=PROX_SCALED_SQ_NORM, coeff=float(coeff))


def prox_linear_shift(shift) -> ProxOperator:
    return ProxOperator(kind=PROX_LINEAR_SHIFT, shift=np.asarray(shift, dtype=np.float64))


def prox_blocks(blocks) -> ProxOperator:
    """Separable composition: blocks is a sequence of (ProxOperator, dim) pairs."""
    blocks = tuple((op, int(dim)) for op, dim in blocks)
    for op, dim in blocks:
        if dim < 1:
            raise ConfigurationError("block dimensions must be positive")
        if op.kind == PROX_BLOCKS:
            raise ConfigurationError("nested block prox operators are not supported")
    return ProxOperator(kind=PROX_BLOCKS, blocks=blocks)


def prox_eval(op: ProxOperator, t: float, z):
    """Evaluate prox_{t*sigma}(z) = argmin_u t*sigma(u) + 0.5||u - z||^2."""
    if t <= 0:
        raise ConfigurationError("prox step t must be positive")
    z = np.asarray(z, dtype=np.float64)
    if op.kind == PROX_ZERO:
        return z.copy()
    if op.kind == PROX_INDICATOR:
        return project_cone(op.cone, z)
    if op.kind == PROX_POLAR_INDICATOR:
        return project_polar(op.cone, z)
    if op.kind == PROX_SCALED_SQ_NORM:
        return z / (1.0 + t * op.coeff)
    if op.kind == PROX_LINEAR_SHIFT:
        if op.shift.shape != z.shape:
            raise ConfigurationError("linear_shift prox dimension mismatch")
        return z - t * op.shift
    if op.kind == PROX_BLOCKS:
        if sum(op.block_dims()) != z.shape[0]:
            raise ConfigurationError(
                f"block prox dimension mismatch: blocks sum to {sum(op.block_dims())}, "
                f"point has {z.shape[0]}"
            )
        out = np.empty_like(z)
        offset = 0
        for sub, dim in op.blocks:
            out[offset : offset + dim] = prox_eval(sub, t, z[offset : offset + dim])
            offset += dim
        return out
    raise ConfigurationError(f"unsupported prox operator kind {op.kind!r}")


@dataclass(frozen=True)
class SmoothOracle:
    """A smooth convex term: value, gradient, and its Lipschitz constant."""

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    lipschitz: float

    def __post_init__(self):
        if not np.isfinite(self.lipschitz) or self.lipschitz < 0:
            raise ConfigurationError("smooth oracle needs a finite lipschitz >= 0")


def smooth_zero() -> SmoothOracle:
    return SmoothOracle(value=lambda z: 0.0, gradient=np.zeros_like, lipschitz=0.0)


def smooth_scaled_sq_norm(coeff: float) -> SmoothOracle:
    """(coeff/2) ||z||^2."""
    c = float(coeff)
    return SmoothOracle(
        value=lambda z: 0.5 * c * float(z @ z),
        gradient=lambda z: c * z,
        lipschitz=abs(c),
    )


def smooth_linear(b) -> SmoothOracle:
    b = np.asarray(b, dtype=np.float64)
    return SmoothOracle(
        value=lambda z: float(b @ z),
        gradient=lambda z: b.copy(),
        lipschitz=0.0,
    )


def smooth_quadratic_diag(d) -> SmoothOracle:
    """(1/2) z^T diag(d) z with d >= 0 entrywise."""
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0):
        raise ConfigurationError("quadratic_diag needs nonnegative diagonal")
    return SmoothOracle(
        value=lambda z: 0.5 * float(z @ (d * z)),
        gradient=lambda z: d * z,
        lipschitz=float(d.max(initial=0.0)),
    )


def forward_backward(h: SmoothOracle, sigma: ProxOperator, L: float, z):
    """One forward-backward step T_L(z) = prox_{sigma/L}(z - grad h(z)/L)."""
    if L <= 0:
        raise ConfigurationError("forward_backward needs L > 0")
    z = np.asarray(z, dtype=np.float64)
    g = np.asarray(h.gradient(z), dtype=np.float64)
    if not np.all(np.isfinite(g)):
        bad = int(np.flatnonzero(~np.isfinite(g))[0])
        raise NumericalError(f"nonfinite gradient at index {bad}")
    return prox_eval(sigma, 1.0 / L, z - g / L)


def gradient_mapping(h: SmoothOracle, sigma: ProxOperator, L: float, z):
    """Gradient mapping G_L(z) = L (z - T_L(z)); zero exactly at stationary points."""
    z = np.asarray(z, dtype=np.float64)
    return L * (z - forward_backward(h, sigma, L, z))
