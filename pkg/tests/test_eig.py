import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentkit.eig import jacobi_eigh, lambda_min
from momentkit.errors import EigFailure


def test_identity():
    w, V = jacobi_eigh(np.eye(3))
    assert np.allclose(w, 1.0)
    assert np.allclose(V @ V.T, np.eye(3), atol=1e-14)


def test_two_by_two_indefinite():
    w, _ = jacobi_eigh([[1.0, 2.0], [2.0, 1.0]])
    assert w == pytest.approx([-1.0, 3.0], abs=1e-12)


def test_zero_matrix_boundary():
    assert lambda_min(np.zeros((2, 2))) == 0.0


def test_one_by_one():
    w, V = jacobi_eigh([[4.0]])
    assert w[0] == 4.0 and V[0, 0] == 1.0


def test_rejects_nonsymmetric():
    with pytest.raises(EigFailure):
        jacobi_eigh([[0.0, 1.0], [0.0, 0.0]])


def test_rejects_oversize():
    with pytest.raises(EigFailure):
        jacobi_eigh(np.eye(65))


def test_rejects_nan():
    with pytest.raises(EigFailure):
        jacobi_eigh([[np.nan, 0.0], [0.0, 1.0]])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_matches_lapack(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    A = A + A.T
    w, V = jacobi_eigh(A)
    w_ref = np.linalg.eigvalsh(A)
    assert np.allclose(w, w_ref, atol=1e-10 * max(1.0, np.abs(A).max()))
    # reconstruction and orthogonality
    assert np.allclose(V @ np.diag(w) @ V.T, A, atol=1e-10 * max(1.0, np.abs(A).max()))
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(1.0, 1e9))
def test_scale_invariance_of_accuracy(seed, scale):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(6, 6))
    A = (A + A.T) * scale
    got = lambda_min(A)
    ref = float(np.linalg.eigvalsh(A)[0])
    assert got == pytest.approx(ref, abs=1e-11 * scale)


def test_moment_scale_hankel():
    # Rank-deficient PSD Hankel with large entries: lambda_min must come out
    # near zero at the matrix scale, not poisoned by loose convergence.
    atoms = np.array([-4.5, -1.0, 2.0, 4.8])
    weights = np.array([1.5, 0.3, 2.0, 0.7])
    mom = np.array([float(weights @ atoms**k) for k in range(11)])
    H = mom[np.add.outer(np.arange(5), np.arange(5))]
    got = lambda_min(H)
    ref = float(np.linalg.eigvalsh(H)[0])
    assert abs(got - ref) <= 1e-10 * np.abs(H).max()
