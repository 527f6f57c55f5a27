"""Continuously-relaxed risk and its analytic gradients.

``R(S) = n^{-1/2} sum_i l(d_S(X_i)) + gamma * Vol(S)`` with the soft-ML loss
``l(u) = 1 - exp(-b u)``. Gradients are ``(K, K+1)`` matrices matching the
vertex layout.

Two routes compute the data gradient. :func:`planar_distance_gradient` builds
one point's term from the facet normal (null vector of the centred facet
matrix) and the projected point's facet coordinates, exactly as derived;
:func:`crr_gradient` sums all points through the compiled barycentric kernel.
The test-suite pins them against each other and against finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DimensionError, UnsupportedOperationError
from .geometry import (
    TIE_RTOL,
    FacetHyperplane,
    Simplex,
    argmax_facet,
    check_nondegenerate,
    diameter_dataset,
    diameter_simplex,
    planar_distance,
    planar_distances,
    volume,
)
from .linalg import adjugate, determinant, pseudo_inverse

EXPONENTIAL = "exponential"
HARD = "hard_indicator"

# distances at or below this fraction of the diameter count as "inside"
INSIDE_RTOL = 1e-12


@dataclass(frozen=True)
class LossSpec:
    kind: str = EXPONENTIAL
    b: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in (EXPONENTIAL, HARD):
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.kind == EXPONENTIAL and not self.b > 0:
            raise ValueError("exponential loss needs b > 0")
        if not self.gamma >= 0:
            raise ValueError("gamma must be non-negative")


def default_rate(data) -> float:
    """Loss rate ``b = 1 / diam(D)``."""
    diam = diameter_dataset(data)
    if diam == 0.0:
        raise ValueError("dataset diameter is zero")
    return 1.0 / diam


def loss(spec: LossSpec, u):
    u = np.asarray(u, dtype=np.float64)
    if spec.kind == HARD:
        out = (u > 0).astype(np.float64)
    else:
        out = -np.expm1(-spec.b * u)
    return float(out) if out.ndim == 0 else out


def loss_derivative(spec: LossSpec, u):
    if spec.kind == HARD:
        raise UnsupportedOperationError("the hard indicator loss has no derivative")
    u = np.asarray(u, dtype=np.float64)
    out = spec.b * np.exp(-spec.b * u)
    return float(out) if out.ndim == 0 else out


def _points(d) -> np.ndarray:
    x = np.asarray(getattr(d, "points", d), dtype=np.float64)
    return x[:, None] if x.ndim == 1 else x


def _check_dims(s: Simplex, x: np.ndarray) -> None:
    if x.ndim != 2 or x.shape[1] != s.k:
        raise DimensionError(f"points of shape {x.shape} do not match K={s.k}")


def crr_risk(s: Simplex, d, spec: LossSpec) -> float:
    x = _points(d)
    _check_dims(s, x)
    if spec.kind == EXPONENTIAL:
        return crr_evaluate(s, x, spec, want_grad=False).risk
    data = float(np.sum(loss(spec, planar_distances(s, x))))
    return data / math.sqrt(len(x)) + spec.gamma * volume(s)


# ----------------------------------------------------------- reference route

def facet_coordinates(s: Simplex, k: int, w: np.ndarray, x) -> np.ndarray:
    """Affine coordinates, over the vertices of facet ``k``, of ``x``'s foot on that facet.

    Solves ``[Theta_{-k}; 1^T] p = [y; 1]`` with ``y = x - w w^T (x - c)`` by
    pseudo-inverse. Keeping the affine row makes the answer correct even when
    the facet plane passes through the origin, where ``Theta_{-k}`` alone is
    singular.
    """
    rest = np.delete(s.vertices, k, axis=1)
    x = np.asarray(x, dtype=np.float64)
    center = rest.mean(axis=1)
    y = x - w * np.dot(w, x - center)
    aug = np.vstack([rest, np.ones((1, s.k))])
    return pseudo_inverse(aug) @ np.append(y, 1.0)


def planar_distance_gradient(s: Simplex, planes: Sequence[FacetHyperplane], x,
                             spec: LossSpec) -> np.ndarray:
    """Gradient of ``l(d_S(x))`` with respect to the vertex matrix.

    Zero when ``x`` is inside; otherwise ``-l'(d) w p*^T`` spread over the
    vertices of the active facet, with a zero column at the opposite vertex.
    """
    if spec.kind != EXPONENTIAL:
        raise UnsupportedOperationError("gradient needs a differentiable loss")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != s.k:
        raise DimensionError(f"point has dimension {x.size}, K={s.k}")
    diam = diameter_simplex(s)
    grad = np.zeros((s.k, s.k + 1))
    dist = planar_distance(planes, x)
    if dist <= INSIDE_RTOL * diam:
        return grad
    k_star, _ = argmax_facet(planes, x, tol=TIE_RTOL * diam)
    w = planes[k_star].w
    if s.k == 1:
        p_star = np.ones(1)
    else:
        p_star = facet_coordinates(s, k_star, w, x)
    cols = [j for j in range(s.k + 1) if j != k_star]
    grad[:, cols] = -loss_derivative(spec, dist) * np.outer(w, p_star)
    return grad


def volume_gradient(s: Simplex) -> np.ndarray:
    """``(sgn det D / K!) [-adj(D)^T 1 | adj(D)^T]`` with ``D = [theta_j - theta_0]``."""
    check_nondegenerate(s)
    dmat = s.vertices[:, 1:] - s.vertices[:, :1]
    sign = math.copysign(1.0, determinant(dmat))
    adj_t = adjugate(dmat).T
    out = np.empty((s.k, s.k + 1))
    out[:, 0] = -adj_t.sum(axis=1)
    out[:, 1:] = adj_t
    return out * (sign / math.factorial(s.k))


# -------------------------------------------------------------- fast route

class Evaluation(NamedTuple):
    risk: float
    gradient: np.ndarray | None
    volume: float
    max_distance: float
    n_exterior: int
    n_ties: int


def crr_evaluate(s: Simplex, x: np.ndarray, spec: LossSpec,
                 active: np.ndarray | None = None, want_grad: bool = True,
                 n_total: int | None = None) -> Evaluation:
    """One kernel pass: risk and gradient over ``x[active]`` (all rows by default).

    The ``n^{-1/2}`` factor always uses ``n_total`` (default ``len(x)``), so a
    restricted active set approximates the full sum without renormalising.
    Risk, maximum distance and counts refer to the rows actually visited.
    """
    if spec.kind != EXPONENTIAL:
        raise UnsupportedOperationError("kernel evaluation needs the exponential loss")
    check_nondegenerate(s)
    ainv, _ = s.frame
    diam = diameter_simplex(s)
    idx = np.arange(len(x)) if active is None else np.asarray(active, dtype=np.int64)
    loss_sum, g, max_d, n_ext, n_ties = kernels.data_terms(
        x, idx, ainv, spec.b, INSIDE_RTOL * diam, TIE_RTOL * diam, want_grad
    )
    scale = 1.0 / math.sqrt(len(x) if n_total is None else n_total)
    vol = volume(s)
    grad = None
    if want_grad:
        grad = scale * np.asarray(g) + spec.gamma * vol * ainv[:, :s.k].T
    return Evaluation(scale * loss_sum + spec.gamma * vol, grad, vol,
                      float(max_d), int(n_ext), int(n_ties))


def crr_gradient(s: Simplex, d, spec: LossSpec, active=None) -> np.ndarray:
    x = _points(d)
    _check_dims(s, x)
    return crr_evaluate(s, x, spec, active=active).gradient
