"""Simplices, their facets, and distances to them.

A K-simplex is stored as a ``(K, K+1)`` vertex matrix whose column ``j`` is
vertex ``theta_j``. Datasets are row-major ``(n, K)`` arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from . import _backend, kernels
from ._backend import njit
from .errors import (
    DegenerateDataError,
    DegenerateSimplexError,
    DimensionError,
    InsufficientDataError,
    NullspaceNotUniqueError,
    UnsupportedOperationError,
)
from .linalg import determinant, null_unit_vector

DEGENERACY_RTOL = 1e-12
TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Simplex:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64, copy=True)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] != v.shape[0] + 1:
            raise DimensionError(f"vertex matrix must be (K, K+1), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex matrix has non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "Simplex":
        """Build from K+1 vertex coordinates given as rows."""
        return cls(np.asarray(points, dtype=np.float64).T)

    @property
    def k(self) -> int:
        return self.vertices.shape[0]

    def vertex(self, j: int) -> np.ndarray:
        return self.vertices[:, j]

    @cached_property
    def frame(self) -> tuple[np.ndarray, float]:
        """Inverse and determinant of the augmented matrix ``[Theta; 1^T]``."""
        ainv, det = kernels.frame(self.vertices)
        ainv = np.asarray(ainv)
        ainv.setflags(write=False)
        return ainv, float(det)

    # vertices are immutable, so scalar measures are computed once
    @cached_property
    def _volume(self) -> float:
        return _volume_of(self)

    @cached_property
    def _diameter(self) -> float:
        return max_pairwise_distance(self.vertices.T)

    def translated(self, t) -> "Simplex":
        return Simplex(self.vertices + np.asarray(t, dtype=np.float64).reshape(-1, 1))

    def scaled(self, c: float, about=None) -> "Simplex":
        o = np.zeros(self.k) if about is None else np.asarray(about, dtype=np.float64)
        return Simplex(o[:, None] + c * (self.vertices - o[:, None]))

    def __eq__(self, other):
        if not isinstance(other, Simplex):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices)

    def __hash__(self):
        return hash(self.vertices.tobytes())

    def __repr__(self):
        return f"Simplex(k={self.k}, vertices={self.vertices.T.tolist()})"


class FacetHyperplane(NamedTuple):
    """Facet ``k`` (the one opposite vertex ``k``): ``{x : w.x + b = 0}``."""

    w: np.ndarray
    b: float
    facet_index: int

    def signed(self, x) -> float:
        return float(np.dot(self.w, x) + self.b)


@dataclass(frozen=True)
class IsoperimetryReport:
    lambda_under: float
    lambda_bar: float


def _pts(data) -> np.ndarray:
    x = np.asarray(getattr(data, "points", data), dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return x


# ------------------------------------------------------------------ measures

def volume(s: Simplex) -> float:
    """K-dimensional Lebesgue measure, ``|det[theta_1-theta_0 | ...]| / K!``."""
    return s._volume


def _volume_of(s: Simplex) -> float:
    if s.k == 1:
        return float(abs(s.vertices[0, 1] - s.vertices[0, 0]))
    d = s.vertices[:, 1:] - s.vertices[:, :1]
    return abs(determinant(d)) / math.factorial(s.k)


def facet_volume(s: Simplex, k: int) -> float:
    """(K-1)-dimensional measure of the facet opposite vertex ``k``."""
    if not 0 <= k <= s.k:
        raise IndexError(f"facet index {k} out of range for K={s.k}")
    pts = np.delete(s.vertices, k, axis=1)
    if s.k == 1:
        return 1.0  # a point: counting measure
    a = pts[:, 1:] - pts[:, :1]
    gram = determinant(a.T @ a)
    return math.sqrt(max(gram, 0.0)) / math.factorial(s.k - 1)


@njit
def _max_pairwise_nb(x):
    n, k = x.shape
    best = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(k):
                t = x[i, c] - x[j, c]
                s += t * t
            if s > best:
                best = s
    return math.sqrt(best)


def _max_pairwise_numpy(x, chunk: int = 128):
    best = 0.0
    for start in range(0, len(x), chunk):
        diff = x[start:start + chunk, None, :] - x[None, :, :]
        best = max(best, float(np.einsum("ijk,ijk->ij", diff, diff).max()))
    return math.sqrt(best)


def max_pairwise_distance(x) -> float:
    x = np.ascontiguousarray(_pts(x))
    if len(x) < 2:
        raise InsufficientDataError("diameter needs at least 2 points")
    if _backend.USE_NUMBA:
        return float(_max_pairwise_nb(x))
    return _max_pairwise_numpy(x)


def diameter_simplex(s: Simplex) -> float:
    return s._diameter


# above this size a low-dimensional diameter is taken over hull vertices only
HULL_DIAMETER_MIN_N = 512


def diameter_dataset(data) -> float:
    """``max_{i,j} |X_i - X_j|``.

    The maximum is attained at extreme points, so large sets in dimension <= 3
    are first reduced to their convex-hull vertices.
    """
    x = _pts(data)
    n, dim = x.shape
    if n >= HULL_DIAMETER_MIN_N and dim <= 3:
        if dim == 1:
            return float(x.max() - x.min())
        from scipy.spatial import QhullError

        try:
            x = x[_exact_hull(x)]
        except (DegenerateDataError, QhullError):
            pass
    return max_pairwise_distance(x)


def is_degenerate(s: Simplex, rtol: float = DEGENERACY_RTOL) -> bool:
    diam = diameter_simplex(s)
    return diam == 0.0 or volume(s) < rtol * diam ** s.k


def check_nondegenerate(s: Simplex) -> None:
    if is_degenerate(s):
        raise DegenerateSimplexError(f"simplex has (near-)zero volume: {s!r}")


def isoperimetry_constants(s: Simplex) -> IsoperimetryReport:
    """Smallest constants meeting both isoperimetric bounds with equality."""
    vol = volume(s)
    if vol <= 0.0:
        raise DegenerateSimplexError("isoperimetry constants need positive volume")
    k = s.k
    lam = diameter_simplex(s) / (k * vol ** (1.0 / k))
    big_facet = max(facet_volume(s, j) for j in range(k + 1))
    lam_bar = big_facet / vol ** ((k - 1) / k)
    return IsoperimetryReport(lambda_under=lam, lambda_bar=lam_bar)


# ------------------------------------------------------------------- facets

def facet_hyperplane(s: Simplex, k: int) -> FacetHyperplane:
    """Outward hyperplane of facet ``k`` via the centred null-vector recipe.

    ``w`` spans the null space of ``(I - 11^T/K) Theta_{-k}^T`` and is flipped
    so that it points away from vertex ``k``; ``b = -w . centroid(facet)``.
    """
    theta = s.vertices
    kk = s.k
    if kk == 1:
        a, other = theta[0, 1 - k], theta[0, k]
        if a == other:
            raise DegenerateSimplexError("segment endpoints coincide")
        w = np.array([1.0 if a > other else -1.0])
        return FacetHyperplane(w=w, b=float(-w[0] * a), facet_index=k)
    rest = np.delete(theta, k, axis=1)
    center = rest.mean(axis=1)
    m = (np.eye(kk) - np.full((kk, kk), 1.0 / kk)) @ rest.T
    try:
        w = null_unit_vector(m)
    except NullspaceNotUniqueError as exc:
        raise DegenerateSimplexError(f"facet {k} is degenerate") from exc
    if np.dot(w, theta[:, k] - center) > 0.0:
        w = -w
    return FacetHyperplane(w=w, b=float(-np.dot(w, center)), facet_index=k)


def facet_hyperplanes(s: Simplex) -> list[FacetHyperplane]:
    check_nondegenerate(s)
    return [facet_hyperplane(s, k) for k in range(s.k + 1)]


def argmax_facet(planes: Sequence[FacetHyperplane], x, tol: float = 0.0) -> tuple[int, float]:
    """Facet with the largest signed value at ``x``; near-ties go to the lowest index."""
    vals = np.array([p.signed(x) for p in planes])
    best = vals.max()
    k = int(np.flatnonzero(vals >= best - tol)[0])
    return k, float(vals[k])


def planar_distance(planes: Sequence[FacetHyperplane], x) -> float:
    """``max(0, max_k w_k . x + b_k)``; zero exactly on the closed simplex."""
    return max(0.0, max(p.signed(x) for p in planes))


def planar_distances(s: Simplex, data) -> np.ndarray:
    """Vectorised planar distance of each data row (fast barycentric path)."""
    check_nondegenerate(s)
    x = _pts(data)
    if x.shape[1] != s.k:
        raise DimensionError(f"points have dimension {x.shape[1]}, simplex K={s.k}")
    return np.asarray(kernels.planar_distances(x, s.frame[0]))


# ------------------------------------------------------------ extreme points

def _affine_frame(x: np.ndarray, rtol: float = 1e-10):
    center = x.mean(axis=0)
    _, sv, vh = np.linalg.svd(x - center, full_matrices=False)
    if sv.size == 0 or sv[0] <= 0.0:
        return center, vh[:0], 0
    rank = int(np.count_nonzero(sv > rtol * sv[0]))
    return center, vh[:rank], rank


def _exact_hull(x: np.ndarray) -> np.ndarray:
    from scipy.spatial import ConvexHull

    center, basis, rank = _affine_frame(x)
    if rank == 0:
        raise DegenerateDataError("all points coincide")
    y = (x - center) @ basis.T
    if rank == 1:
        return np.unique([int(np.argmin(y[:, 0])), int(np.argmax(y[:, 0]))])
    return np.sort(ConvexHull(y).vertices)


def _approx_hull(x: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    dirs = rng.standard_normal((m, x.shape[1]))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return np.unique(np.argmax(x @ dirs.T, axis=0))


def extreme_points(data, mode: str = "auto", m_directions: int | None = None,
                   seed=None) -> np.ndarray:
    """Indices of convex-hull vertices of the dataset, sorted ascending.

    ``mode="exact"`` (dimension <= 3) returns precisely the hull vertices;
    ``"approximate"`` keeps the maximiser of ``m_directions`` random linear
    functionals (default ``50 * dim``), a subset of the hull vertices. ``"auto"``
    picks exact when possible.
    """
    x = _pts(data)
    n, dim = x.shape
    if n < dim + 1:
        raise InsufficientDataError(f"need at least {dim + 1} points, got {n}")
    if np.all(x == x[0]):
        raise DegenerateDataError("all points coincide")
    if mode == "auto":
        mode = "exact" if dim <= 3 else "approximate"
    if mode == "exact":
        if dim > 3:
            raise UnsupportedOperationError("exact hulls are limited to dimension <= 3")
        return _exact_hull(x)
    if mode == "approximate":
        m = 50 * dim if m_directions is None else int(m_directions)
        if m < 1:
            raise ValueError("m_directions must be positive")
        return _approx_hull(x, m, np.random.default_rng(seed))
    raise ValueError(f"unknown mode {mode!r}")
