import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import leibniz_det
from simplexlearn import _backend
from simplexlearn.errors import DimensionError, NullspaceNotUniqueError
from simplexlearn.linalg import (
    adjugate,
    determinant,
    lu_det,
    lu_solve_inverse,
    null_unit_vector,
    principal_components,
    pseudo_inverse,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def square(max_side=6):
    return st.integers(1, max_side).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=finite))


def cofactor_adjugate(m):
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1))
    c = np.empty_like(m)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(m, i, axis=0), j, axis=1)
            c[i, j] = (-1) ** (i + j) * leibniz_det(minor)
    return c.T


# ---------------------------------------------------------------- determinant

def test_determinant_examples():
    assert determinant(np.eye(5)) == pytest.approx(1.0)
    assert determinant([[1.0, 2.0], [3.0, 4.0]]) == pytest.approx(-2.0)
    assert determinant([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [0.5, 1.0, 7.0]]) == 0.0


def test_determinant_rejects_non_square():
    with pytest.raises(DimensionError):
        determinant(np.ones((2, 3)))


@given(square())
def test_determinant_matches_permutation_expansion(m):
    ref = leibniz_det(m)
    scale = max(1.0, np.prod(np.linalg.norm(m, axis=1)))
    assert abs(determinant(m) - ref) <= 1e-10 * scale


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@given(square())
def test_compiled_lu_matches_lapack(m):
    scale = max(1.0, np.prod(np.linalg.norm(m, axis=1)))
    assert abs(lu_det(m) - np.linalg.det(m)) <= 1e-10 * scale


def test_lu_inverse_round_trip():
    rng = np.random.default_rng(0)
    for n in range(1, 9):
        a = rng.normal(size=(n, n)) + n * np.eye(n)
        inv, det = lu_solve_inverse(a)
        np.testing.assert_allclose(inv @ a, np.eye(n), atol=1e-10)
        assert det == pytest.approx(np.linalg.det(a), rel=1e-10)


def test_lu_inverse_flags_singular():
    inv, det = lu_solve_inverse(np.zeros((3, 3)))
    assert det == 0.0
    assert not inv.any()


def test_numpy_backend_determinant(monkeypatch):
    monkeypatch.setattr(_backend, "USE_NUMBA", False)
    assert determinant([[1.0, 2.0], [3.0, 4.0]]) == pytest.approx(-2.0)


# ------------------------------------------------------------------ adjugate

def test_adjugate_examples():
    np.testing.assert_allclose(adjugate(np.eye(3)), np.eye(3), atol=1e-14)
    np.testing.assert_allclose(adjugate([[1.0, 2.0], [3.0, 4.0]]), [[4, -2], [-3, 1]], atol=1e-12)
    np.testing.assert_array_equal(adjugate([[7.0]]), [[1.0]])


@given(square(5))
def test_adjugate_matches_cofactors(m):
    ref = cofactor_adjugate(m)
    scale = max(1.0, np.abs(ref).max())
    np.testing.assert_allclose(adjugate(m), ref, atol=1e-9 * scale)


def test_adjugate_identity_on_many_random_matrices():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        m = rng.normal(size=(n, n))
        lhs = m @ adjugate(m)
        det = determinant(m)
        scale = max(1.0, np.abs(lhs).max())
        np.testing.assert_allclose(lhs, det * np.eye(n), atol=1e-8 * scale)


def test_adjugate_of_rank_deficient_matrix():
    m = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [1.0, 0.0, 1.0]])
    np.testing.assert_allclose(adjugate(m), cofactor_adjugate(m), atol=1e-12)
    assert np.linalg.matrix_rank(adjugate(m)) == 1


# ----------------------------------------------------------- pseudo-inverse

def _penrose(m, p, tol):
    scale = max(1.0, np.abs(m).max(), np.abs(p).max()) ** 3
    np.testing.assert_allclose(m @ p @ m, m, atol=tol * scale)
    np.testing.assert_allclose(p @ m @ p, p, atol=tol * scale)
    np.testing.assert_allclose((m @ p).T, m @ p, atol=tol * scale)
    np.testing.assert_allclose((p @ m).T, p @ m, atol=tol * scale)


def test_pseudo_inverse_examples():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    np.testing.assert_allclose(pseudo_inverse(a), np.linalg.inv(a), atol=1e-14)
    z = pseudo_inverse(np.zeros((2, 3)))
    assert z.shape == (3, 2) and not z.any()
    # rank one: [[1,0],[1,0]] = sqrt2 * u v^T with u=(1,1)/sqrt2, v=e1
    np.testing.assert_allclose(pseudo_inverse([[1.0, 0.0], [1.0, 0.0]]),
                               [[0.5, 0.5], [0.0, 0.0]], atol=1e-14)


def test_pseudo_inverse_penrose_on_rank_deficient_inputs():
    rng = np.random.default_rng(2)
    for _ in range(200):
        r, c = rng.integers(1, 7, size=2)
        rank = int(rng.integers(0, min(r, c) + 1))
        m = rng.normal(size=(r, rank)) @ rng.normal(size=(rank, c))
        _penrose(m, pseudo_inverse(m), 1e-8)


def test_pseudo_inverse_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        pseudo_inverse(np.eye(2), tol=0.0)


# --------------------------------------------------------------- null vector

def test_null_vector_examples():
    v = null_unit_vector(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(np.abs(v), [0.0, 1.0], atol=1e-15)
    rest = np.array([[1.0, 0.0], [0.0, 1.0]])  # columns (1,0), (0,1)
    m = (np.eye(2) - 0.5) @ rest.T
    v = null_unit_vector(m)
    np.testing.assert_allclose(np.abs(v), [2 ** -0.5, 2 ** -0.5], atol=1e-14)
    with pytest.raises(NullspaceNotUniqueError):
        null_unit_vector(np.eye(3))
    with pytest.raises(NullspaceNotUniqueError):
        null_unit_vector(np.diag([1.0, 0.0, 0.0]))
    with pytest.raises(NullspaceNotUniqueError):
        null_unit_vector(np.zeros((2, 2)))


@given(arrays(np.float64, (4, 3), elements=st.floats(-5, 5)))
def test_null_vector_annihilates(cols):
    m = cols @ np.random.default_rng(0).normal(size=(3, 4))
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0 or s[2] <= 1e-6 * s[0]:
        return  # rank below 3: null space not one-dimensional
    v = null_unit_vector(m)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert np.linalg.norm(m @ v) <= 1e-10 * np.linalg.norm(m)


# ----------------------------------------------------------------------- PCA

def test_pca_line():
    t = np.linspace(-2, 3, 11)
    pc = principal_components(np.c_[t, t], 1)
    np.testing.assert_allclose(pc.basis[:, 0], [2 ** -0.5, 2 ** -0.5], atol=1e-12)
    full = principal_components(np.c_[t, t], 2)
    assert full.variances[1] == pytest.approx(0.0, abs=1e-20)


def test_pca_matches_covariance_eigen_decomposition():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(200, 5)) @ rng.normal(size=(5, 5))
    pc = principal_components(x, 3)
    evals = np.sort(np.linalg.eigvalsh(np.cov(x.T)))[::-1]
    np.testing.assert_allclose(pc.variances, evals[:3], rtol=1e-10)
    np.testing.assert_allclose(pc.basis.T @ pc.basis, np.eye(3), atol=1e-10)
    assert np.all(np.diff(pc.variances) <= 0)
    proj = pc.project(x)
    np.testing.assert_allclose(proj.var(axis=0, ddof=1).sum(), pc.variances.sum(), rtol=1e-10)


def test_pca_full_rank_and_plane_reconstruction():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(30, 4))
    pc = principal_components(x, 4)
    np.testing.assert_allclose(pc.reconstruct(pc.project(x)), x, atol=1e-10)
    plane = rng.normal(size=(50, 2)) @ rng.normal(size=(2, 5)) + rng.normal(size=5)
    pc2 = principal_components(plane, 2)
    resid = plane - pc2.reconstruct(pc2.project(plane))
    assert (resid ** 2).sum() / (len(plane) - 1) < 1e-10


def test_pca_wide_data_keeps_everything():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(8, 300))
    pc = principal_components(x, 7)
    np.testing.assert_allclose(pc.reconstruct(pc.project(x)), x, atol=1e-9)


def test_pca_rejects_bad_dimension():
    x = np.random.default_rng(6).normal(size=(5, 3))
    for d in (0, 4, 5):
        with pytest.raises(DimensionError):
            principal_components(x, d)
