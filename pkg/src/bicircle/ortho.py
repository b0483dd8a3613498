"""Orthonormal polynomial vectors in the lexicographical and reverse orderings."""
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import MissingLevel
from .kernel import lower_cholesky, triangular_inverse
from .moments import MomentTable, _check_ordering, gram_matrix


@dataclass(frozen=True)
class OrthoLevel:
    """Orthonormal vector ``Phi_{n,m}`` (lex) or ``tilde Phi_{n,m}`` (revlex).

    ``K`` has one row per polynomial, leading index first
    (``phi^m, ..., phi^0`` for lex), and one column per monomial of the
    descending basis: ``z^n w^m, z^n w^(m-1), ..., 1`` for lex and
    ``w^m z^n, w^m z^(n-1), ..., 1`` for revlex.
    """

    n: int
    m: int
    ordering: str
    K: np.ndarray = field(repr=False)

    @property
    def rows(self):
        return self.m + 1 if self.ordering == "lex" else self.n + 1

    @property
    def poly(self):
        """Coefficient array of shape ``(rows, n + 1, m + 1)`` indexed by (z, w) powers."""
        return K_to_poly(self.K, self.n, self.m, self.ordering)

    @classmethod
    def from_poly(cls, P, n, m, ordering):
        return cls(n, m, ordering, poly_to_K(P, n, m, ordering))

    def leading(self):
        """Leading coefficients ``k^{n,l}_{n,m,l}`` in row order."""
        return np.array([self.K[r, r] for r in range(self.rows)])


def K_to_poly(K, n, m, ordering):
    K = np.asarray(K)
    if ordering == "lex":
        # column c = (n - i)(m + 1) + (m - j)
        return K.reshape(-1, n + 1, m + 1)[:, ::-1, ::-1].copy()
    # column c = (m - j)(n + 1) + (n - i)
    return np.swapaxes(K.reshape(-1, m + 1, n + 1)[:, ::-1, ::-1], 1, 2).copy()


def poly_to_K(P, n, m, ordering):
    P = poly.pad_to(P, n, m)
    if ordering == "lex":
        return P[:, ::-1, ::-1].reshape(P.shape[0], -1).copy()
    return np.swapaxes(P, 1, 2)[:, ::-1, ::-1].reshape(P.shape[0], -1).copy()


def orthonormalize(table, n, m, ordering="lex"):
    """Gram-Schmidt in the chosen ordering, via Cholesky of the monomial Gram matrix.

    If ``G = L L^H`` in ascending order, the rows of ``L^{-1}`` are the
    orthonormalized monomials; the last ``m + 1`` of them are ``phi^0..phi^m``.

    Raises
    ------
    NotPositiveDefinite
        If the moment matrix of level (n, m) is not positive definite.
    """
    _check_ordering(ordering)
    if ordering == "revlex":
        lex = orthonormalize(table.T, m, n, "lex")
        return OrthoLevel(n, m, "revlex", lex.K)
    L = lower_cholesky(gram_matrix(table, n, m))
    Linv = triangular_inverse(L)
    last = Linv[-(m + 1):]
    return OrthoLevel(n, m, "lex", last[::-1, ::-1].copy())


def reverse(level):
    """Coefficient array of the reversed vector at the level's formal degree (n, m)."""
    return poly.reverse(level.poly, level.n, level.m)


def evaluate(level, z, w):
    return poly.evaluate(level.poly, z, w)


@dataclass(frozen=True)
class MatrixPolyView:
    """Two coefficient decompositions of a level.

    For a lex level ``primary[k]`` is ``Phi^m_{n,k}``, the coefficient of
    ``z^k`` as an (m+1) x (m+1) matrix acting on ``[w^m, ..., 1]``, and
    ``secondary[i]`` is ``L^i_{n,m}``, the coefficient of ``w^i`` acting on
    ``[z^n, ..., 1]``.  For revlex levels z and w trade places.
    """

    primary: np.ndarray
    secondary: np.ndarray

    @property
    def leading(self):
        return self.primary[-1]


def views(level):
    P = level.poly
    if level.ordering == "revlex":
        P = poly.transpose(P)
    # P[a, i, j]: i primary power, j secondary power
    primary = np.transpose(P[:, :, ::-1], (1, 0, 2))
    secondary = np.transpose(P[:, ::-1, :], (2, 0, 1))
    return MatrixPolyView(primary.copy(), secondary.copy())


def from_views(view, n, m, ordering):
    P = np.transpose(view.primary, (1, 0, 2))[:, :, ::-1]
    if ordering == "revlex":
        P = poly.transpose(P)
    return OrthoLevel.from_poly(P, n, m, ordering)


class OrthoSystem:
    """All lex and revlex levels of a measure on ``[0, N] x [0, M]``.

    Out-of-range indices below zero give empty vectors, which makes boundary
    relations evaluate with zero-sized matrices.  ``.T`` is the system of the
    measure with z and w interchanged, in which lex and revlex trade places.
    """

    def __init__(self, table, N, M, lex=None, revlex=None):
        self.table = table
        self.N, self.M = N, M
        if lex is None:
            lex = {(n, m): orthonormalize(table, n, m, "lex")
                   for n in range(N + 1) for m in range(M + 1)}
        if revlex is None:
            revlex = {(n, m): orthonormalize(table, n, m, "revlex")
                      for n in range(N + 1) for m in range(M + 1)}
        self.lex = lex
        self.revlex = revlex
        self._T = None

    @classmethod
    def build(cls, table, N, M):
        return cls(table, N, M)

    def _get(self, store, n, m):
        if n < 0 or m < 0:
            return poly.empty(max(n, 0), max(m, 0))
        try:
            return store[(n, m)].poly
        except KeyError:
            raise MissingLevel(f"level ({n}, {m}) not available") from None

    def phi(self, n, m):
        return self._get(self.lex, n, m)

    def phit(self, n, m):
        return self._get(self.revlex, n, m)

    def rev(self, n, m):
        """``<- Phi_{n,m}^T`` as a column of reversed polynomials."""
        P = self.phi(n, m)
        return poly.reverse(P, n, m) if P.shape[0] else P

    def revt(self, n, m):
        P = self.phit(n, m)
        return poly.reverse(P, n, m) if P.shape[0] else P

    def view(self, n, m):
        return views(self.lex[(n, m)])

    def viewt(self, n, m):
        return views(self.revlex[(n, m)])

    def has(self, n, m):
        return (n, m) in self.lex and (n, m) in self.revlex

    @property
    def T(self):
        if self._T is None:
            lex = {(m, n): _swap(lv) for (n, m), lv in self.revlex.items()}
            revlex = {(m, n): _swap(lv) for (n, m), lv in self.lex.items()}
            table = self.table.T if isinstance(self.table, MomentTable) else None
            self._T = OrthoSystem(table, self.M, self.N, lex, revlex)
            self._T._T = self
        return self._T


def _swap(level):
    other = "lex" if level.ordering == "revlex" else "revlex"
    return OrthoLevel(level.m, level.n, other, level.K)
