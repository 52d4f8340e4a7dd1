import numpy as np
import pytest

from copcut.linalg import (
    SingularMatrixError,
    mat,
    mat_adjoint,
    solve_pd,
    vec,
    vec_dim,
    vec_length,
)


def test_vec_ordering_2x2():
    X = np.array([[1.0, 2.0], [2.0, 3.0]])
    assert np.array_equal(vec(X), [1.0, 2.0, 3.0])


def test_vec_identity_3x3():
    assert np.array_equal(vec(np.eye(3)), [1, 0, 1, 0, 0, 1])


def test_vec_zero_diagonal():
    X = np.array([[0.0, 5.0], [5.0, 0.0]])
    assert np.array_equal(vec(X), [0.0, 5.0, 0.0])


def test_mat_inverts_vec():
    x = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(mat(x), [[1.0, 2.0], [2.0, 3.0]])


def test_mat_zero_vector():
    assert np.array_equal(mat(np.zeros(6)), np.zeros((3, 3)))


def test_mat_identity():
    assert np.array_equal(mat([1.0, 0.0, 1.0]), np.eye(2))


def test_mat_rejects_non_triangular_length():
    with pytest.raises(ValueError):
        mat(np.zeros(5))


def test_roundtrip_exact():
    rng = np.random.default_rng(7)
    for d in range(1, 11):
        G = rng.normal(size=(d, d))
        X = G + G.T
        assert np.array_equal(mat(vec(X)), X)
        x = rng.normal(size=vec_length(d))
        assert np.array_equal(vec(mat(x)), x)


def _adjoint_by_basis(C):
    """Independent oracle: <C, mat(e_k)> for every basis vector e_k."""
    n = vec_length(C.shape[0])
    out = np.zeros(n)
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        out[k] = float(np.sum(C * mat(e)))
    return out


def test_mat_adjoint_examples():
    C = np.array([[1.0, 2.0], [2.0, 3.0]])
    expected = _adjoint_by_basis(C)
    assert np.allclose(expected, [1.0, 4.0, 3.0], atol=1e-14)
    assert np.allclose(mat_adjoint(C), expected, atol=1e-14)

    assert np.array_equal(mat_adjoint(np.eye(2)), [1.0, 0.0, 1.0])

    E = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(mat_adjoint(E), _adjoint_by_basis(E), atol=1e-14)
    assert np.array_equal(mat_adjoint(E), [0.0, 2.0, 0.0])


def test_adjoint_identity_random():
    rng = np.random.default_rng(11)
    for d in range(1, 11):
        G = rng.normal(size=(d, d))
        C = G + G.T
        H = rng.normal(size=(d, d))
        X = H + H.T
        lhs = float(mat_adjoint(C) @ vec(X))
        rhs = float(np.sum(C * X))
        scale = 1.0 + np.linalg.norm(C) * np.linalg.norm(X)
        assert abs(lhs - rhs) <= 1e-12 * scale


def test_vec_norm_single_counts_off_diagonals():
    rng = np.random.default_rng(3)
    G = rng.normal(size=(4, 4))
    X = G + G.T
    n2 = float(np.linalg.norm(vec(X)) ** 2)
    expected = float(np.sum(np.diag(X) ** 2))
    for i in range(4):
        for j in range(i + 1, 4):
            expected += X[i, j] ** 2
    assert abs(n2 - expected) <= 1e-12 * (1.0 + expected)
    # And it differs from the Frobenius norm as soon as off-diagonals exist.
    assert n2 < float(np.linalg.norm(X) ** 2)


def test_vec_dim_inverse():
    for d in range(1, 30):
        assert vec_dim(vec_length(d)) == d


def test_solve_pd_diagonal():
    v = solve_pd(2.0 * np.eye(3), [2.0, 4.0, 6.0])
    assert np.allclose(v, [1.0, 2.0, 3.0], atol=1e-12)
    v = solve_pd(np.diag([4.0, 9.0]), [8.0, 27.0])
    assert np.allclose(v, [2.0, 3.0], atol=1e-12)


def test_solve_pd_random_spd_residual():
    rng = np.random.default_rng(5)
    G = rng.normal(size=(5, 5))
    M = G.T @ G + np.eye(5)
    rhs = rng.normal(size=5)
    v = solve_pd(M, rhs)
    resid = np.linalg.norm(M @ v - rhs)
    assert resid <= 1e-10 * max(1.0, np.linalg.norm(rhs))


def test_solve_pd_rejects_asymmetric():
    M = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        solve_pd(M, [1.0, 1.0])


def test_solve_pd_shift_recovers_semidefinite():
    # Rank-deficient PSD: plain Cholesky fails, the shift ladder recovers.
    M = np.outer([1.0, 1.0], [1.0, 1.0])
    rhs = np.array([1.0, 1.0])
    v = solve_pd(M, rhs)
    assert np.all(np.isfinite(v))
    assert np.linalg.norm(M @ v - rhs) <= 1e-4


def test_solve_pd_singularity_error():
    M = np.diag([1.0, -1.0])
    with pytest.raises(SingularMatrixError):
        solve_pd(M, [1.0, 1.0])
