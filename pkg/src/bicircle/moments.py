"""Measures on the bi-circle, their Fourier moments and moment matrices.

Moments follow the convention ``c[k, j] = integral of exp(-i k theta - i j phi)``
so that ``<z^a w^b, z^c w^d> = c[c - a, d - b]``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import DegreeZeroLeading, GridTooCoarse, IndexOutOfRange, UnstableDensity

DEFAULT_GRID = 256
MARGIN_MIN = 1e-8
STABILITY_SLICES = 512


@dataclass(frozen=True)
class StablePolynomial:
    """Polynomial ``p(z, w) = sum p[i, j] z^i w^j`` of exact degree ``coeffs.shape - 1``.

    The associated measure is ``dtheta dphi / (4 pi^2 |p|^2)``.  ``scale`` is
    the factor that turns ``p`` into the polynomial of the *probability*
    measure (``c[0, 0] = 1``); it is 1 until :meth:`normalized` is called.
    """

    coeffs: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 2:
            raise ValueError("coefficient table must be two-dimensional")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if c[-1, -1] == 0:
            raise DegreeZeroLeading("leading coefficient p[n, m] is zero")

    @property
    def deg_z(self):
        return self.coeffs.shape[0] - 1

    @property
    def deg_w(self):
        return self.coeffs.shape[1] - 1

    def reverse(self):
        """The reverse ``z^n w^m conj(p)(1/z, 1/w)`` as a coefficient table."""
        return self.coeffs[::-1, ::-1].conj()

    def __call__(self, z, w):
        return poly.evaluate_grid(self.coeffs, z, w)

    @classmethod
    def from_reverse(cls, rev):
        """Build ``p`` from the table of its (stable) reverse."""
        rev = np.atleast_2d(np.asarray(rev, dtype=complex))
        return cls(rev[::-1, ::-1].conj())

    def normalized(self, grid_size=DEFAULT_GRID):
        """Rescale so that ``1 / |p|^2`` integrates to one on the torus."""
        theta = 2 * np.pi * np.arange(grid_size) / grid_size
        z = np.exp(1j * theta)[:, None]
        w = np.exp(1j * theta)[None, :]
        mass = np.mean(1.0 / np.abs(self(z, w)) ** 2)
        s = float(np.sqrt(mass))
        return StablePolynomial(self.coeffs * s, scale=self.scale * s)


@dataclass(frozen=True)
class StabilityCertificate:
    passed: bool
    margin: float
    witness: tuple = None

    def __bool__(self):
        return self.passed


def _slice_roots(rev, w):
    # rev[i, j] z^i w^j at fixed w -> polynomial in z, highest power first for np.roots
    zcoef = rev @ (w ** np.arange(rev.shape[1]))
    nz = np.nonzero(np.abs(zcoef) > 0)[0]
    if nz.size == 0:
        return np.array([0j])
    zcoef = zcoef[: nz[-1] + 1]
    if zcoef.size == 1:
        return np.array([], dtype=complex)
    return np.roots(zcoef[::-1])


def check_stability(p, slices=STABILITY_SLICES, margin_min=MARGIN_MIN, grid_size=DEFAULT_GRID):
    """Certify that the reverse of ``p`` has no zero in the closed bidisk.

    For each of ``slices`` points ``w`` on the unit circle the z-polynomial
    ``rev(., w)`` is checked for roots in the closed disk, then the same with
    z and w interchanged; finally the minimum modulus over a torus grid is
    the reported margin.

    Returns
    -------
    StabilityCertificate
        ``passed`` with the margin, or failed with a witness ``(z, w)`` near a zero.
    """
    if not isinstance(p, StablePolynomial):
        p = StablePolynomial(p)
    rev = p.reverse()
    circle = np.exp(2j * np.pi * np.arange(slices) / slices)
    for swapped, table in ((False, rev), (True, rev.T)):
        for w in circle:
            roots = _slice_roots(table, w)
            inside = roots[np.abs(roots) <= 1.0 + 1e-12]
            if inside.size:
                z = inside[np.argmax(np.abs(inside))]
                witness = (complex(w), complex(z)) if swapped else (complex(z), complex(w))
                return StabilityCertificate(False, 0.0, witness)
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    Z = np.exp(1j * theta)[:, None]
    W = np.exp(1j * theta)[None, :]
    vals = np.abs(poly.evaluate_grid(rev, Z, W))
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    margin = float(vals[idx])
    if margin <= margin_min:
        return StabilityCertificate(False, margin, (complex(Z[idx[0], 0]), complex(W[0, idx[1]])))
    return StabilityCertificate(True, margin)


@dataclass(frozen=True)
class MomentTable:
    """Fourier moments ``c[k, j]`` for ``|k| <= kmax``, ``|j| <= jmax``.

    Only ``k >= 0`` is stored (``half[k, j + jmax]``); negative ``k`` is
    produced on read from ``c[-k, -j] = conj(c[k, j])``.
    """

    half: np.ndarray
    scale: float = 1.0
    grid_size: int = 0

    def __post_init__(self):
        h = np.array(self.half, dtype=complex)
        if h.ndim != 2 or h.shape[1] % 2 != 1:
            raise ValueError("half table must have shape (kmax+1, 2*jmax+1)")
        # the k = 0 row is its own conjugate mirror
        h[0] = 0.5 * (h[0] + h[0, ::-1].conj())
        h.setflags(write=False)
        object.__setattr__(self, "half", h)

    @property
    def kmax(self):
        return self.half.shape[0] - 1

    @property
    def jmax(self):
        return (self.half.shape[1] - 1) // 2

    @classmethod
    def from_full(cls, full, **kw):
        """From an array indexed ``full[k + kmax, j + jmax]``; symmetry is enforced by averaging."""
        full = np.asarray(full, dtype=complex)
        kmax = (full.shape[0] - 1) // 2
        sym = 0.5 * (full + full[::-1, ::-1].conj())
        return cls(sym[kmax:], **kw)

    @classmethod
    def from_entries(cls, kmax, jmax, entries, **kw):
        half = np.zeros((kmax + 1, 2 * jmax + 1), dtype=complex)
        for (k, j), v in entries.items():
            if k < 0:
                k, j, v = -k, -j, np.conj(v)
            if k > kmax or abs(j) > jmax:
                raise IndexOutOfRange(f"moment ({k}, {j}) outside table")
            half[k, j + jmax] = v
            if k == 0:
                half[0, jmax - j] = np.conj(v)
        return cls(half, **kw)

    def dense(self):
        """Full array ``D[k + kmax, j + jmax]``."""
        lower = self.half[1:][::-1, ::-1].conj()
        return np.vstack([lower, self.half])

    def __call__(self, k, j):
        if abs(k) > self.kmax or abs(j) > self.jmax:
            raise IndexOutOfRange(f"moment ({k}, {j}) outside |k|<={self.kmax}, |j|<={self.jmax}")
        if k < 0:
            return complex(np.conj(self.half[-k, -j + self.jmax]))
        return complex(self.half[k, j + self.jmax])

    @property
    def T(self):
        """Moments of the measure with theta and phi interchanged."""
        return MomentTable.from_full(self.dense().T, scale=self.scale, grid_size=self.grid_size)

    def restrict(self, kmax, jmax):
        if kmax > self.kmax or jmax > self.jmax:
            raise IndexOutOfRange("cannot enlarge a moment table")
        return MomentTable(self.half[: kmax + 1, self.jmax - jmax : self.jmax + jmax + 1],
                           scale=self.scale, grid_size=self.grid_size)

    def symmetry_residual(self):
        D = self.dense()
        return float(np.abs(D - D[::-1, ::-1].conj()).max())


def torus_grid(grid_size):
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    return theta[:, None], theta[None, :]


def compute_moments(source, kmax, jmax, grid_size=DEFAULT_GRID, normalize=True, check=True):
    """Fourier moments of a density on the torus by the equispaced product rule.

    Parameters
    ----------
    source : StablePolynomial or callable
        Either ``p`` (density ``1 / |p|^2``) or a function ``f(theta, phi)``
        returning non-negative density values on broadcast grids.
    kmax, jmax : int
        Index bounds of the returned table.
    grid_size : int
        Number of nodes per circle.
    normalize : bool
        Rescale to a probability measure; the raw ``c[0, 0]`` is kept as ``scale``.

    Raises
    ------
    UnstableDensity
        The reverse of ``p`` vanishes in the closed bidisk.
    GridTooCoarse
        ``grid_size`` is below ``4 * max(kmax + deg_z, jmax + deg_w)`` or the
        computed table is not conjugate symmetric.
    """
    dz, dw = (source.deg_z, source.deg_w) if isinstance(source, StablePolynomial) else (0, 0)
    if grid_size < 4 * max(kmax + dz, jmax + dw, 1):
        raise GridTooCoarse(f"grid {grid_size} too coarse for kmax={kmax}, jmax={jmax}")
    if isinstance(source, StablePolynomial):
        if check:
            cert = check_stability(source)
            if not cert:
                raise UnstableDensity(f"reverse polynomial vanishes near {cert.witness}")
        theta, phi = torus_grid(grid_size)
        f = 1.0 / np.abs(source(np.exp(1j * theta), np.exp(1j * phi))) ** 2
    else:
        theta, phi = torus_grid(grid_size)
        f = np.broadcast_to(np.asarray(source(theta, phi), dtype=float), (grid_size, grid_size))
    F = np.fft.fft2(f) / grid_size**2
    ks = np.arange(-kmax, kmax + 1) % grid_size
    js = np.arange(-jmax, jmax + 1) % grid_size
    full = F[np.ix_(ks, js)]
    asym = float(np.abs(full - full[::-1, ::-1].conj()).max())
    if asym > 1e-10:
        raise GridTooCoarse(f"symmetry residual {asym:.2e}")
    scale = 1.0
    if normalize:
        scale = float(full[kmax, jmax].real)
        full = full / scale
    return MomentTable.from_full(full, scale=scale, grid_size=grid_size)


@dataclass(frozen=True)
class MomentMatrix:
    level: tuple
    ordering: str
    data: np.ndarray = field(repr=False)


def _check_ordering(ordering):
    if ordering not in ("lex", "revlex"):
        raise ValueError(f"ordering must be 'lex' or 'revlex', got {ordering!r}")


def build_moment_matrix(table, n, m, ordering="lex"):
    """Doubly Toeplitz moment matrix: block (r, s) is ``C_{r-s}``, ``(C_i)[a, b] = c[i, a-b]``.

    For ``revlex`` the roles of (n, m) and of the two moment indices are interchanged.
    """
    _check_ordering(ordering)
    if ordering == "revlex":
        inner = build_moment_matrix(table.T, m, n, "lex").data
        return MomentMatrix((n, m), "revlex", inner)
    if n > table.kmax or m > table.jmax or n < 0 or m < 0:
        raise IndexOutOfRange(f"level ({n}, {m}) outside moment table")
    D = table.dense()
    r = np.repeat(np.arange(n + 1), m + 1)
    a = np.tile(np.arange(m + 1), n + 1)
    data = D[(r[:, None] - r[None, :]) + table.kmax, (a[:, None] - a[None, :]) + table.jmax]
    return MomentMatrix((n, m), "lex", data)


def gram_matrix(table, n, m):
    """Gram matrix ``<x_a, x_b>`` of the monomials ``z^i w^j`` in ascending lex order."""
    if n > table.kmax or m > table.jmax:
        raise IndexOutOfRange(f"level ({n}, {m}) outside moment table")
    D = table.dense()
    i = np.repeat(np.arange(n + 1), m + 1)
    j = np.tile(np.arange(m + 1), n + 1)
    return D[(i[None, :] - i[:, None]) + table.kmax, (j[None, :] - j[:, None]) + table.jmax]


def inner_product(P, Q, table):
    """Matrix ``<P, Q> = integral of P Q^H`` for column vectors of polynomials.

    Entry (a, b) is ``sum P[a,i,j] conj(Q[b,k,l]) c[k-i, l-j]``; exact, no quadrature.
    """
    P = poly.trim(poly.as_vector(P))
    Q = poly.trim(poly.as_vector(Q))
    if P.shape[0] == 0 or Q.shape[0] == 0:
        return np.zeros((P.shape[0], Q.shape[0]), dtype=complex)
    dk = max(P.shape[1], Q.shape[1]) - 1
    dj = max(P.shape[2], Q.shape[2]) - 1
    if dk > table.kmax or dj > table.jmax:
        raise IndexOutOfRange(f"inner product needs moments up to ({dk}, {dj})")
    D = table.dense()
    i1, j1 = np.meshgrid(np.arange(P.shape[1]), np.arange(P.shape[2]), indexing="ij")
    i2, j2 = np.meshgrid(np.arange(Q.shape[1]), np.arange(Q.shape[2]), indexing="ij")
    i1, j1, i2, j2 = i1.ravel(), j1.ravel(), i2.ravel(), j2.ravel()
    Mo = D[(i2[None, :] - i1[:, None]) + table.kmax, (j2[None, :] - j1[:, None]) + table.jmax]
    Pf = P.reshape(P.shape[0], -1)
    Qf = Q.reshape(Q.shape[0], -1)
    return Pf @ Mo @ Qf.conj().T
