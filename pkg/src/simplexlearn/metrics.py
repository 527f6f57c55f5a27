"""Evaluation of an estimated simplex against a reference or a dataset."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionError
from .geometry import (
    Simplex,
    check_nondegenerate,
    diameter_simplex,
    planar_distances,
    volume,
)
from .sampling import dirichlet_weights, rng_from


@dataclass(frozen=True)
class ErrorReport:
    error: float
    matching: tuple[int, ...]  # reference vertex k  <->  estimate vertex matching[k]
    normalized_error: float


def squared_distance_costs(s_true: Simplex, s_est: Simplex) -> np.ndarray:
    a, b = s_true.vertices.T, s_est.vertices.T
    return ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1)


def vertex_error(s_true: Simplex, s_est: Simplex) -> ErrorReport:
    """Permutation-matched vertex error.

    ``error^2 = min_perm sum_k |theta_k - theta_hat_perm(k)|^2 / (K (K+1))``,
    solved as a linear assignment on squared distances. ``normalized_error``
    divides by the diameter of ``s_true``.
    """
    if s_true.k != s_est.k:
        raise DimensionError(f"K mismatch: {s_true.k} vs {s_est.k}")
    k = s_true.k
    cost = squared_distance_costs(s_true, s_est)
    rows, cols = linear_sum_assignment(cost)
    err = math.sqrt(cost[rows, cols].sum() / (k * (k + 1)))
    diam = diameter_simplex(s_true)
    return ErrorReport(err, tuple(int(c) for c in cols), err / diam if diam > 0 else math.inf)


@dataclass(frozen=True)
class TVEstimate:
    value: float
    stderr: float
    samples: int


def tv_distance_mc(s1: Simplex, s2: Simplex, m: int = 100_000, seed=None) -> TVEstimate:
    """Total variation between uniform laws on two simplices, by Monte Carlo.

    For uniform densities ``TV = 1 - Vol(S1 & S2) / max(Vol1, Vol2)``; the
    overlap fraction is the share of ``m`` uniform draws from the larger
    simplex that land in the smaller one. ``stderr`` is the binomial one.
    """
    if s1.k != s2.k:
        raise DimensionError(f"K mismatch: {s1.k} vs {s2.k}")
    if m < 1:
        raise ValueError("m must be positive")
    check_nondegenerate(s1)
    check_nondegenerate(s2)
    big, small = (s1, s2) if volume(s1) >= volume(s2) else (s2, s1)
    pts = dirichlet_weights(m, big.k, rng_from(seed)) @ big.vertices.T
    tol = 1e-12 * diameter_simplex(small)
    inside = float(np.count_nonzero(planar_distances(small, pts) <= tol)) / m
    tv = 1.0 - inside
    return TVEstimate(tv, math.sqrt(inside * (1.0 - inside) / m), m)


def barycentric_coordinates(s: Simplex, x) -> np.ndarray:
    """Weights ``p`` with ``Theta p = x`` and ``sum(p) = 1``; rows in, rows out."""
    check_nondegenerate(s)
    pts = np.asarray(getattr(x, "points", x), dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != s.k:
        raise DimensionError(f"points have dimension {pts.shape[1]}, K={s.k}")
    aug = np.vstack([s.vertices, np.ones((1, s.k + 1))])
    rhs = np.vstack([pts.T, np.ones((1, len(pts)))])
    p = np.linalg.solve(aug, rhs).T
    return p[0] if single else p


def containment_fraction(s: Simplex, d, tol: float = 1e-6) -> float:
    """Share of points whose planar distance is at most ``tol * diam(s)``."""
    pts = np.asarray(getattr(d, "points", d), dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    dist = planar_distances(s, pts)
    return float(np.count_nonzero(dist <= tol * diameter_simplex(s))) / len(pts)

