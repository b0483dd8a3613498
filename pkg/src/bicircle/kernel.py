"""Dense complex linear algebra primitives.

Matrices here are small (at most a few dozen rows), so everything is plain
numpy/LAPACK.  The two Cholesky orientations are needed because recurrence
coefficients are either "outer" factors (``R @ R^H = M``) or "Gram" factors
(``R^H @ R = M``), both upper triangular with a positive diagonal.
"""
import numpy as np
import scipy.linalg

from .errors import NotHermitian, NotPositiveDefinite, SingularDiagonal

TOL_HERM = 1e-10
PIVOT_RTOL = 1e-13


def hermitian_part(M, tol=TOL_HERM):
    """Return ``(M + M^H) / 2`` after checking ``M`` is hermitian to ``tol`` (relative)."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size == 0:
        return M.copy()
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.conj().T).max() > tol * scale:
        raise NotHermitian("matrix is not hermitian within tolerance")
    return 0.5 * (M + M.conj().T)


def _lower_cholesky(M):
    H = hermitian_part(M)
    if H.size == 0:
        return H
    trace = np.real(np.trace(H))
    if trace <= 0:
        raise NotPositiveDefinite("non-positive trace")
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.real(np.diag(L)) ** 2
    if pivots.min() <= PIVOT_RTOL * trace:
        raise NotPositiveDefinite(f"pivot {pivots.min():.3e} below threshold")
    return L


def lower_cholesky(M):
    """Lower triangular ``L`` with positive diagonal and ``L @ L^H = M``."""
    return _lower_cholesky(M)


def factor_outer_upper(M):
    """Upper triangular ``R`` with positive diagonal such that ``R @ R^H = M``.

    Computed as ``J L J`` where ``L`` is the lower Cholesky factor of ``J M J``
    and ``J`` is the anti-identity.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is not safely positive.
    """
    M = np.asarray(M, dtype=complex)
    L = _lower_cholesky(M[::-1, ::-1])
    return np.ascontiguousarray(L[::-1, ::-1])


def factor_gram_upper(M):
    """Upper triangular ``R`` with positive diagonal such that ``R^H @ R = M``."""
    L = _lower_cholesky(M)
    return np.ascontiguousarray(L.conj().T)


def solve_triangular(T, B, side="left", lower=None):
    """Solve ``T X = B`` (``side='left'``) or ``X T = B`` (``side='right'``).

    ``lower`` is inferred from the zero pattern of ``T`` when not given.
    """
    T = np.asarray(T, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if T.size == 0:
        shape = (0, B.shape[1]) if side == "left" else (B.shape[0], 0)
        return np.zeros(shape, dtype=complex)
    if np.any(np.diag(T) == 0):
        raise SingularDiagonal("triangular matrix has a zero on its diagonal")
    if lower is None:
        lower = np.allclose(np.triu(T, 1), 0.0) and not np.allclose(np.tril(T, -1), 0.0)
    if side == "left":
        return scipy.linalg.solve_triangular(T, B, lower=lower)
    if side == "right":
        # X T = B  <=>  T^T X^T = B^T
        return scipy.linalg.solve_triangular(T, B.T, trans="T", lower=lower).T
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def triangular_inverse(T):
    T = np.asarray(T, dtype=complex)
    return solve_triangular(T, np.eye(T.shape[0], dtype=complex))


def shift_up(m):
    """``U_m = [0 | I_m]``, an m x (m+1) selector."""
    return np.hstack([np.zeros((m, 1)), np.eye(m)])


def shift_down(m):
    """``U^1_m = [I_m | 0]``, an m x (m+1) selector."""
    return np.hstack([np.eye(m), np.zeros((m, 1))])


def anti_identity(size):
    return np.eye(size)[::-1].copy()


def last_unit(m):
    e = np.zeros(m)
    if m:
        e[-1] = 1.0
    return e


def selectors(m):
    """Return ``(U_m, U^1_m, J, e)`` with ``J`` of size m+1 and ``e`` of length m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return shift_up(m), shift_down(m), anti_identity(m + 1), last_unit(m)


def max_abs(X):
    """Infinity-norm of the entries; 0 for empty arrays."""
    X = np.asarray(X)
    return float(np.abs(X).max()) if X.size else 0.0
