"""Small dense-matrix kernels.

Everything here targets matrices with a side of at most a few dozen. The LU
factorization is hand-written so the same compiled routine runs inside the
gradient kernels; the numpy backend uses LAPACK's equivalent pivoted LU.
Singular-value work is delegated to LAPACK through numpy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from ._backend import njit
from .errors import DimensionError, NullspaceNotUniqueError

DEFAULT_RANK_TOL = 1e-10


def _as_matrix(m, square: bool = False) -> np.ndarray:
    a = np.array(m, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


@njit
def lu_inplace(a):
    """Doolittle LU with partial pivoting, overwriting ``a``.

    Returns ``(perm, sign)``: row permutation and its parity (+1/-1). A zero
    pivot column is skipped, leaving a zero on the diagonal.
    """
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for j in range(n):
        p = j
        best = abs(a[j, j])
        for i in range(j + 1, n):
            v = abs(a[i, j])
            if v > best:
                best = v
                p = i
        if p != j:
            tmp = a[j].copy()
            a[j] = a[p]
            a[p] = tmp
            t = perm[j]
            perm[j] = perm[p]
            perm[p] = t
            sign = -sign
        piv = a[j, j]
        if piv != 0.0:
            for i in range(j + 1, n):
                f = a[i, j] / piv
                a[i, j] = f
                if f != 0.0:
                    for c in range(j + 1, n):
                        a[i, c] -= f * a[j, c]
    return perm, sign


@njit
def lu_det(a):
    """Determinant of a square matrix via :func:`lu_inplace` (on a copy)."""
    b = a.copy()
    _, sign = lu_inplace(b)
    d = sign
    for i in range(b.shape[0]):
        d *= b[i, i]
    return d


@njit
def lu_solve_inverse(a):
    """Inverse and determinant of ``a`` from one pivoted factorization.

    The inverse is garbage when the determinant is zero; callers check.
    """
    n = a.shape[0]
    lu = a.copy()
    perm, sign = lu_inplace(lu)
    det = sign
    for i in range(n):
        det *= lu[i, i]
    inv = np.zeros((n, n))
    if det == 0.0:
        return inv, det
    for col in range(n):
        # forward substitution with unit-lower L on the permuted identity
        y = np.zeros(n)
        for i in range(n):
            s = 1.0 if perm[i] == col else 0.0
            for k in range(i):
                s -= lu[i, k] * y[k]
            y[i] = s
        for i in range(n - 1, -1, -1):
            s = y[i]
            for k in range(i + 1, n):
                s -= lu[i, k] * inv[k, col]
            inv[i, col] = s / lu[i, i]
    return inv, det


def determinant(m) -> float:
    """Determinant by partial-pivot LU.

    >>> determinant([[1.0, 2.0], [3.0, 4.0]])
    -2.0
    """
    a = _as_matrix(m, square=True)
    if _backend.USE_NUMBA:
        return float(lu_det(a))
    with np.errstate(all="ignore"):
        return float(np.linalg.det(a))  # LAPACK getrf: also partial-pivot LU


def _cofactor_scales(s: np.ndarray) -> np.ndarray:
    # prod_{j != i} s_j without dividing, so zero singular values are safe
    n = s.size
    prefix = np.ones(n)
    suffix = np.ones(n)
    for i in range(1, n):
        prefix[i] = prefix[i - 1] * s[i - 1]
    for i in range(n - 2, -1, -1):
        suffix[i] = suffix[i + 1] * s[i + 1]
    return prefix * suffix


def adjugate(m) -> np.ndarray:
    """Classical adjugate (transposed cofactor matrix), valid for singular input.

    Uses ``adj(U S V^T) = det(U) det(V) V adj(S) U^T`` where ``adj(S)`` is the
    diagonal of products of all-but-one singular values.
    """
    a = _as_matrix(m, square=True)
    if a.shape[0] == 1:
        return np.ones((1, 1))
    u, s, vh = np.linalg.svd(a)
    orient = determinant(u) * determinant(vh)
    return orient * (vh.T * _cofactor_scales(s)) @ u.T


def pseudo_inverse(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse; singular values below ``tol * s_max`` are dropped."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = _as_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(a.T.shape)
    keep = s > tol * s[0]
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (vh.T * inv_s) @ u.T


def null_unit_vector(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Unit vector spanning the one-dimensional null space of a square matrix.

    Raises :class:`NullspaceNotUniqueError` unless exactly one singular value
    falls below ``tol`` times the largest. The sign is arbitrary.
    """
    a = _as_matrix(m, square=True)
    _, s, vh = np.linalg.svd(a)
    if s[0] == 0.0:
        raise NullspaceNotUniqueError("zero matrix has a full null space")
    small = int(np.count_nonzero(s <= tol * s[0]))
    if small != 1:
        raise NullspaceNotUniqueError(
            f"expected exactly one near-zero singular value, found {small}"
        )
    v = vh[-1]
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class PrincipalComponents:
    mean: np.ndarray       # (D,)
    basis: np.ndarray      # (D, d), orthonormal columns
    variances: np.ndarray  # (d,), non-increasing

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=np.float64) - self.mean) @ self.basis

    def reconstruct(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.float64) @ self.basis.T + self.mean


def principal_components(data, d: int) -> PrincipalComponents:
    """Top-``d`` principal directions of an ``(n, D)`` point array.

    Variances use the ``n - 1`` denominator. Component signs are fixed so the
    largest-magnitude loading of each direction is positive.
    """
    x = _as_matrix(getattr(data, "points", data))
    n, ambient = x.shape
    if not 1 <= d <= min(n - 1, ambient):
        raise DimensionError(
            f"d={d} outside [1, min(n-1, D)] = [1, {min(n - 1, ambient)}]"
        )
    mean = x.mean(axis=0)
    _, s, vh = np.linalg.svd(x - mean, full_matrices=False)
    basis = vh[:d].T.copy()
    lead = np.argmax(np.abs(basis), axis=0)
    flip = np.sign(basis[lead, np.arange(d)])
    flip[flip == 0] = 1.0
    basis *= flip
    variances = s[:d] ** 2 / (n - 1)
    return PrincipalComponents(mean=mean, basis=basis, variances=variances)
