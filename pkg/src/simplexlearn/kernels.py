"""Per-point hot loops behind risk and gradient evaluation.

Both paths describe facets through the inverse of the augmented vertex matrix
``A = [Theta; 1^T]``. Row ``k`` of ``A^{-1}`` gives barycentric coordinate
``p_k(x) = r_k . x + c_k``, so facet ``k`` has outward unit normal
``-r_k / |r_k|`` and signed distance ``-p_k(x) / |r_k|``. The volume gradient
with respect to vertex ``k`` is ``Vol * r_k``.

Each public function dispatches on :data:`simplexlearn._backend.USE_NUMBA`;
``*_numba`` and ``*_numpy`` variants are exported for the parity tests and the
benchmark.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from ._backend import njit
from .linalg import lu_solve_inverse


def augmented(theta: np.ndarray) -> np.ndarray:
    k = theta.shape[0]
    a = np.empty((k + 1, k + 1))
    a[:k] = theta
    a[k] = 1.0
    return a


# --------------------------------------------------------------------- frame

@njit
def _frame_nb(theta):
    k = theta.shape[0]
    a = np.empty((k + 1, k + 1))
    for i in range(k):
        for j in range(k + 1):
            a[i, j] = theta[i, j]
    for j in range(k + 1):
        a[k, j] = 1.0
    return lu_solve_inverse(a)


def frame_numba(theta):
    return _frame_nb(np.ascontiguousarray(theta, dtype=np.float64))


def frame_numpy(theta):
    a = augmented(np.asarray(theta, dtype=np.float64))
    with np.errstate(all="ignore"):
        det = float(np.linalg.det(a))
    if det == 0.0:
        return np.zeros_like(a), 0.0
    return np.linalg.inv(a), det


def frame(theta):
    """``(A^{-1}, det A)`` for the augmented vertex matrix."""
    if _backend.USE_NUMBA:
        return frame_numba(theta)
    return frame_numpy(theta)


# ------------------------------------------------------------ planar distance

@njit
def _distances_nb(x, ainv):
    n, k = x.shape
    out = np.empty(n)
    norms = np.empty(k + 1)
    for f in range(k + 1):
        s = 0.0
        for j in range(k):
            s += ainv[f, j] * ainv[f, j]
        norms[f] = math.sqrt(s)
    for i in range(n):
        best = -np.inf
        for f in range(k + 1):
            p = ainv[f, k]
            for j in range(k):
                p += ainv[f, j] * x[i, j]
            v = -p / norms[f]
            if v > best:
                best = v
        out[i] = best if best > 0.0 else 0.0
    return out


def distances_numba(x, ainv):
    return _distances_nb(np.ascontiguousarray(x, dtype=np.float64), ainv)


def signed_values_numpy(x, ainv):
    k = ainv.shape[0] - 1
    r = ainv[:, :k]
    norms = np.linalg.norm(r, axis=1)
    return -(np.asarray(x, dtype=np.float64) @ r.T + ainv[:, k]) / norms


def distances_numpy(x, ainv):
    return np.maximum(signed_values_numpy(x, ainv).max(axis=1), 0.0)


def planar_distances(x, ainv):
    """Planar distance of every row of ``x`` to the simplex framed by ``ainv``."""
    if _backend.USE_NUMBA:
        return distances_numba(x, ainv)
    return distances_numpy(x, ainv)


# ---------------------------------------------------------------- data term

@njit
def _data_terms_nb(x, idx, ainv, rate, inside_tol, tie_tol, want_grad):
    k = x.shape[1]
    m = idx.shape[0]
    norms = np.empty(k + 1)
    for f in range(k + 1):
        s = 0.0
        for j in range(k):
            s += ainv[f, j] * ainv[f, j]
        norms[f] = math.sqrt(s)
    grad = np.zeros((k, k + 1))
    vals = np.empty(k + 1)
    w = np.empty(k)
    y = np.empty(k)
    loss = 0.0
    max_d = 0.0
    n_ext = 0
    n_ties = 0
    for t in range(m):
        i = idx[t]
        best = -np.inf
        for f in range(k + 1):
            p = ainv[f, k]
            for j in range(k):
                p += ainv[f, j] * x[i, j]
            v = -p / norms[f]
            vals[f] = v
            if v > best:
                best = v
        d = best if best > 0.0 else 0.0
        loss += 1.0 - math.exp(-rate * d)
        if d > max_d:
            max_d = d
        if d <= inside_tol:
            continue
        n_ext += 1
        ks = -1
        hits = 0
        for f in range(k + 1):
            if vals[f] >= best - tie_tol:
                hits += 1
                if ks < 0:
                    ks = f
        if hits > 1:
            n_ties += 1
        if not want_grad:
            continue
        for j in range(k):
            w[j] = -ainv[ks, j] / norms[ks]
        for j in range(k):
            y[j] = x[i, j] - vals[ks] * w[j]
        coef = rate * math.exp(-rate * d)
        for f in range(k + 1):
            if f == ks:
                continue
            q = ainv[f, k]
            for j in range(k):
                q += ainv[f, j] * y[j]
            q *= coef
            for j in range(k):
                grad[j, f] -= w[j] * q
    return loss, grad, max_d, n_ext, n_ties


def data_terms_numba(x, idx, ainv, rate, inside_tol, tie_tol, want_grad=True):
    return _data_terms_nb(
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(idx, dtype=np.int64),
        np.ascontiguousarray(ainv),
        float(rate), float(inside_tol), float(tie_tol), bool(want_grad),
    )


def data_terms_numpy(x, idx, ainv, rate, inside_tol, tie_tol, want_grad=True):
    k = ainv.shape[0] - 1
    xs = np.asarray(x, dtype=np.float64)[np.asarray(idx, dtype=np.int64)]
    vals = signed_values_numpy(xs, ainv)
    best = vals.max(axis=1) if len(xs) else np.zeros(0)
    d = np.maximum(best, 0.0)
    loss = float(np.sum(1.0 - np.exp(-rate * d)))
    max_d = float(d.max()) if d.size else 0.0
    ext = d > inside_tol
    near = vals[ext] >= best[ext, None] - tie_tol
    n_ties = int(np.count_nonzero(near.sum(axis=1) > 1))
    grad = np.zeros((k, k + 1))
    if want_grad and np.any(ext):
        ks = np.argmax(near, axis=1)
        rows = np.arange(ks.size)
        r = ainv[:, :k]
        norms = np.linalg.norm(r, axis=1)
        w = -r[ks] / norms[ks, None]
        y = xs[ext] - vals[ext][rows, ks][:, None] * w
        q = y @ r.T + ainv[:, k]
        q[rows, ks] = 0.0
        coef = rate * np.exp(-rate * d[ext])
        grad = -(w * coef[:, None]).T @ q
    return loss, grad, max_d, int(np.count_nonzero(ext)), n_ties


def data_terms(x, idx, ainv, rate, inside_tol, tie_tol, want_grad=True):
    """Exponential-loss data term over the rows ``x[idx]``.

    Returns ``(sum of losses, summed gradient (K, K+1), max planar distance,
    exterior count, tie count)``. Points within ``inside_tol`` of the simplex
    get no gradient; facet ties within ``tie_tol`` go to the lowest index.
    """
    if _backend.USE_NUMBA:
        return data_terms_numba(x, idx, ainv, rate, inside_tol, tie_tol, want_grad)
    return data_terms_numpy(x, idx, ainv, rate, inside_tol, tie_tol, want_grad)
