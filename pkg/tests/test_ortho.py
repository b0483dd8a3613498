import numpy as np
import pytest

from bicircle import densities, poly
from bicircle.coeffs import one_dim_verblunsky
from bicircle.moments import compute_moments, inner_product
from bicircle.ortho import OrthoLevel, evaluate, from_views, orthonormalize, reverse, views

DIAG = np.array([[-1.0, 0.0], [0.0, 2.0]]) / np.sqrt(3)


@pytest.mark.parametrize("n,m", [(0, 0), (1, 1), (2, 1), (1, 3)])
def test_lebesgue_levels_are_monomials(n, m):
    t = compute_moments(densities.lebesgue(), n, m)
    lv = orthonormalize(t, n, m)
    expect = np.zeros((m + 1, (n + 1) * (m + 1)))
    expect[:, : m + 1] = np.eye(m + 1)
    assert np.allclose(lv.K, expect, atol=1e-15)


def test_diagonal_top_polynomial(diag):
    _, _, sys, _ = diag
    P = sys.phi(1, 1)
    assert np.abs(P[0] - DIAG).max() < 1e-12


def test_staircase_and_positive_leading(measure):
    _, _, _, sys, _ = measure
    for lv in list(sys.lex.values()) + list(sys.revlex.values()):
        for r in range(lv.rows):
            assert np.all(lv.K[r, :r] == 0)
        lead = lv.leading()
        assert np.all(lead.real > 0) and np.allclose(lead.imag, 0)


def test_cross_level_orthogonality(measure):
    _, _, table, sys, _ = measure
    for m in range(3):
        for n in range(3):
            for n2 in range(n + 1, 4):
                assert np.abs(inner_product(sys.phi(n, m), sys.phi(n2, m), table)).max() < 1e-10


def test_lex_top_equals_revlex_top(measure):
    # the leading polynomial z^n w^m + ... is the same in both orderings
    _, _, _, sys, _ = measure
    for (n, m) in sys.lex:
        assert poly.max_diff(sys.phi(n, m)[:1], sys.phit(n, m)[:1]) < 1e-10


def test_m0_row_is_one_dimensional(measure):
    _, _, table, sys, _ = measure
    c = np.array([table(k, 0) for k in range(5)])
    alpha, a = one_dim_verblunsky(c)
    # normalized 1D Szego recursion rebuilt from alpha
    phi = np.array([1.0 + 0j])
    for al, an in zip(alpha, a):
        z_phi = np.concatenate([[0], phi])
        rev = np.concatenate([phi[::-1].conj(), [0]])
        phi = an * (z_phi - al * rev)
        n = len(phi) - 1
        assert np.abs(sys.phi(n, 0)[0, :, 0] - phi).max() < 1e-10


def test_reverse_examples(diag):
    _, _, sys, _ = diag
    R = reverse(sys.lex[(1, 1)])
    assert np.abs(R[0] - DIAG[::-1, ::-1]).max() < 1e-12
    # rows z^2 w and z^2 reverse to 1 and w
    R = reverse(OrthoLevel(2, 1, "lex", np.eye(2, 6)))
    assert R[0, 0, 0] == 1 and R[1, 0, 1] == 1 and np.count_nonzero(R) == 2


def test_reverse_involution(measure):
    _, _, _, sys, _ = measure
    lv = sys.lex[(2, 1)]
    assert np.array_equal(poly.reverse(reverse(lv), 2, 1), lv.poly)


def test_evaluate_examples(diag, leb):
    assert np.allclose(evaluate(leb[2].lex[(1, 1)], 1, 1), [1, 1])
    v = evaluate(diag[2].lex[(1, 1)], 1, 1)
    assert np.isclose(v[0], 1 / np.sqrt(3))
    lv = diag[2].lex[(2, 2)]
    assert np.allclose(evaluate(lv, 0, 0), lv.K[:, -1])


def test_views(diag, leb):
    V = views(leb[2].lex[(2, 1)])
    assert np.allclose(V.primary[2], np.eye(2)) and np.allclose(V.primary[:2], 0)
    L = V.secondary[1]
    assert L[0, 0] == 1 and np.count_nonzero(L) == 1
    W = views(diag[2].lex[(1, 1)])
    assert np.allclose(np.tril(W.leading, -1), 0)
    assert np.isclose(W.leading[0, 0], 2 / np.sqrt(3))
    assert np.all(np.diag(W.leading).real > 0)


def test_views_round_trip(measure):
    _, _, _, sys, _ = measure
    for store in (sys.lex, sys.revlex):
        for (n, m), lv in store.items():
            assert np.array_equal(from_views(views(lv), n, m, lv.ordering).K, lv.K)


def test_transposed_system_swaps_orderings(measure):
    _, _, _, sys, _ = measure
    T = sys.T
    assert np.array_equal(T.phi(1, 2), poly.transpose(sys.phit(2, 1)))
    assert np.array_equal(T.T.phi(2, 1), sys.phi(2, 1))
