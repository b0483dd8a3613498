"""Coefficient-array arithmetic for vectors of bivariate polynomials.

A vector polynomial with ``r`` rows is stored as a complex array of shape
``(r, dz + 1, dw + 1)`` where ``P[a, i, j]`` is the coefficient of
``z**i * w**j`` in row ``a``.  An empty vector has ``r = 0``.
"""
import numpy as np

from .errors import DivisionResidual


def empty(dz=0, dw=0):
    return np.zeros((0, dz + 1, dw + 1), dtype=complex)


def as_vector(P):
    P = np.asarray(P, dtype=complex)
    if P.ndim == 2:
        P = P[None]
    if P.ndim != 3:
        raise ValueError(f"expected (rows, dz+1, dw+1), got shape {P.shape}")
    return P


def pad_to(P, dz, dw):
    P = as_vector(P)
    out = np.zeros((P.shape[0], dz + 1, dw + 1), dtype=complex)
    out[:, : P.shape[1], : P.shape[2]] = P
    return out


def trim(P):
    """Drop trailing all-zero z/w slices (keeps at least one of each)."""
    P = as_vector(P)
    nz = np.nonzero(np.any(P != 0, axis=(0, 2)))[0]
    nw = np.nonzero(np.any(P != 0, axis=(0, 1)))[0]
    dz = nz[-1] if nz.size else 0
    dw = nw[-1] if nw.size else 0
    return P[:, : dz + 1, : dw + 1]


def shift(P, dz=0, dw=0):
    """Multiply every row by ``z**dz * w**dw``."""
    P = as_vector(P)
    return np.pad(P, ((0, 0), (dz, 0), (dw, 0)))


def add(*polys):
    polys = [as_vector(P) for P in polys]
    dz = max(P.shape[1] for P in polys) - 1
    dw = max(P.shape[2] for P in polys) - 1
    return sum(pad_to(P, dz, dw) for P in polys)


def sub(P, Q):
    return add(P, -as_vector(Q))


def matmul(M, P):
    """Left-multiply the column of polynomials ``P`` by the matrix ``M``."""
    P = as_vector(P)
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[None]
    return np.einsum("ab,bij->aij", M, P)


def reverse(P, dz, dw):
    """Row-wise reverse ``z**dz w**dw conj(p)(1/z, 1/w)`` at formal degree (dz, dw)."""
    P = as_vector(P)
    if P.shape[1] > dz + 1 or P.shape[2] > dw + 1:
        raise ValueError("polynomial exceeds the formal degree of the reversal")
    return pad_to(P, dz, dw)[:, ::-1, ::-1].conj()


def transpose(P):
    """Swap the roles of z and w."""
    return np.swapaxes(as_vector(P), 1, 2)


def divide_w(P, tol):
    """Exact division by ``w``; the w**0 column must be ``<= tol`` in modulus."""
    P = as_vector(P)
    res = float(np.abs(P[:, :, 0]).max()) if P.size else 0.0
    if res > tol:
        raise DivisionResidual(f"w-division remainder {res:.3e} exceeds {tol:.1e}")
    out = P[:, :, 1:]
    if out.shape[2] == 0:
        out = np.zeros(P.shape[:2] + (1,), dtype=complex)
    return out, res


def evaluate(P, z, w):
    """Evaluate every row at the point (z, w)."""
    P = as_vector(P)
    zp = z ** np.arange(P.shape[1])
    wp = w ** np.arange(P.shape[2])
    return np.einsum("aij,i,j->a", P, zp, wp)


def evaluate_grid(p, z, w):
    """Evaluate a scalar polynomial table ``p[i, j]`` on broadcastable arrays z, w.

    Uses nested Horner in z then w.
    """
    p = np.asarray(p, dtype=complex)
    out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
    for i in range(p.shape[0] - 1, -1, -1):
        row = np.zeros_like(out)
        for j in range(p.shape[1] - 1, -1, -1):
            row = row * w + p[i, j]
        out = out * z + row
    return out


def max_diff(P, Q):
    D = sub(P, Q)
    return float(np.abs(D).max()) if D.size else 0.0
