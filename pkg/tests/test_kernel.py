import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicircle.errors import NotHermitian, NotPositiveDefinite, SingularDiagonal
from bicircle.kernel import (factor_gram_upper, factor_outer_upper, hermitian_part, selectors,
                             solve_triangular)


def random_pd(rng, k):
    X = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    return X @ X.conj().T + k * np.eye(k)


@pytest.mark.parametrize("factor", [factor_outer_upper, factor_gram_upper])
def test_identity_is_fixed(factor):
    assert np.allclose(factor(np.eye(3)), np.eye(3))


def test_scalar_cases():
    assert np.isclose(factor_outer_upper([[0.75]])[0, 0], np.sqrt(0.75))
    assert np.isclose(factor_gram_upper([[0.36]])[0, 0], 0.6)


def test_outer_factor_of_diagonal_example():
    E = np.array([[0.5, 0], [0, 0]])
    R = factor_outer_upper(np.eye(2) - E @ E.conj().T)
    assert np.allclose(R, np.diag([np.sqrt(3) / 2, 1.0]), atol=1e-15)


def test_gram_factor_2x2():
    M = np.array([[1, 0.5], [0.5, 1]])
    R = factor_gram_upper(M)
    assert np.allclose(np.tril(R, -1), 0)
    assert np.allclose(R.conj().T @ R, M, atol=1e-15)


@pytest.mark.parametrize("k", [1, 2, 5, 12, 30])
def test_factor_orientations(rng, k):
    M = random_pd(rng, k)
    R = factor_outer_upper(M)
    S = factor_gram_upper(M)
    for T in (R, S):
        assert np.allclose(np.tril(T, -1), 0)
        assert np.all(np.diag(T).real > 0) and np.allclose(np.diag(T).imag, 0)
    assert np.abs(R @ R.conj().T - M).max() <= 1e-12 * np.abs(M).max()
    assert np.abs(S.conj().T @ S - M).max() <= 1e-12 * np.abs(M).max()


def test_factorization_is_deterministic(rng):
    M = random_pd(rng, 8)
    assert np.array_equal(factor_outer_upper(M), factor_outer_upper(M))


def test_indefinite_raises():
    with pytest.raises(NotPositiveDefinite):
        factor_outer_upper(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefinite):
        factor_gram_upper(np.diag([1.0, 1e-16]))


def test_non_hermitian_raises():
    with pytest.raises(NotHermitian):
        hermitian_part(np.array([[1, 1], [0, 1]]))


def test_hermitian_part_symmetrizes_noise():
    M = np.array([[1, 0.5 + 1e-13], [0.5, 1]])
    H = hermitian_part(M)
    assert np.array_equal(H, H.conj().T)


def test_solve_triangular_cases(rng):
    B = rng.normal(size=(3, 2))
    assert np.allclose(solve_triangular(np.eye(3), B), B)
    assert np.allclose(solve_triangular(np.diag([2.0, 4.0]), np.eye(2)), np.diag([0.5, 0.25]))
    T = np.triu(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))) + 4 * np.eye(6)
    B = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    assert np.abs(T @ solve_triangular(T, B) - B).max() <= 1e-12
    C = B.T
    assert np.abs(solve_triangular(T, C, side="right") @ T - C).max() <= 1e-12
    L = T.T.copy()
    assert np.abs(L @ solve_triangular(L, B) - B).max() <= 1e-12


def test_singular_diagonal():
    with pytest.raises(SingularDiagonal):
        solve_triangular(np.array([[1.0, 2.0], [0.0, 0.0]]), np.eye(2))


def test_selectors_small():
    U, U1, J, e = selectors(1)
    assert np.array_equal(U, [[0, 1]]) and np.array_equal(U1, [[1, 0]])
    assert np.array_equal(J, [[0, 1], [1, 0]])
    assert np.array_equal(e, [1])


@given(st.integers(0, 9))
def test_selector_identities(m):
    U, U1, J, e = selectors(m)
    assert U.shape == U1.shape == (m, m + 1)
    assert np.array_equal(U @ U.T, np.eye(m))
    assert np.array_equal(U1 @ U1.T, np.eye(m))
    assert np.array_equal(J @ J, np.eye(m + 1))
    if m:
        e_next = np.zeros(m + 1)
        e_next[-1] = 1
        assert np.array_equal(U.T @ e, e_next)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_factor_property(k, seed):
    M = random_pd(np.random.default_rng(seed), k)
    R = factor_outer_upper(M)
    S = factor_gram_upper(M)
    assert np.abs(R @ R.conj().T - M).max() <= 1e-11 * np.abs(M).max()
    assert np.abs(S.conj().T @ S - M).max() <= 1e-11 * np.abs(M).max()
