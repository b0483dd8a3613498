"""Recurrence coefficients of the lex/revlex orthonormal systems and their identities.

Every coefficient is an inner product of two polynomial vectors of an
:class:`~bicircle.ortho.OrthoSystem`.  Tilde (revlex) coefficients at level
(n, m) are the lex coefficients of the transposed system at (m, n); all
``~``-prefixed relations are produced that way.
"""
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import InvariantViolation, MissingLevel, NotPositiveDefinite, SingularLeadingCoefficient
from .kernel import anti_identity, max_abs, shift_down, shift_up, solve_triangular
from .moments import inner_product
from .reports import DEFAULT_TOL, ResidualReport

INVARIANT_TOL = 1e-8
NAMES = ("E", "A", "K", "G", "K1", "G1", "I", "I1")


@dataclass(frozen=True)
class CoeffLevel:
    """The eight lex recurrence matrices at level (n, m).

    ``E`` is the symmetric matrix called hat-E, ``G``/``G1`` are the two
    Gamma matrices and ``K``/``K1`` the two kappa matrices.  ``tilde`` holds
    the revlex family at the same level (its own ``tilde`` is ``None``).
    """

    n: int
    m: int
    E: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    K1: np.ndarray = field(repr=False)
    G1: np.ndarray = field(repr=False)
    I: np.ndarray = field(repr=False)
    I1: np.ndarray = field(repr=False)
    tilde: "CoeffLevel" = field(default=None, repr=False)

    def matrices(self):
        return {k: getattr(self, k) for k in NAMES}


def _lex_coefficients(sys, n, m):
    ip = lambda X, Y: inner_product(X, Y, sys.table)  # noqa: E731
    zprev = poly.shift(sys.phi(n - 1, m), dz=1)
    wlow = poly.shift(sys.phi(n, m - 1), dw=1)
    cur = sys.phi(n, m)
    return CoeffLevel(
        n, m,
        E=ip(zprev, sys.rev(n - 1, m)),
        A=ip(zprev, cur),
        K=ip(sys.phi(n, m - 1), sys.phit(n - 1, m)),
        G=ip(sys.phi(n, m - 1), cur),
        K1=ip(wlow, sys.revt(n - 1, m)),
        G1=ip(wlow, cur),
        I=ip(cur, sys.phit(n, m)),
        I1=ip(sys.rev(n, m), sys.phit(n, m)),
    )


def check_invariants(c, tol=INVARIANT_TOL):
    """Raise :class:`InvariantViolation` naming the first structural property that fails."""
    m = c.m
    if max_abs(c.E - c.E.T) > tol:
        raise InvariantViolation(f"E_{c.n},{m} not symmetric")
    if c.A.size:
        d = np.diag(c.A)
        if max_abs(np.tril(c.A, -1)) > tol or np.any(d.real <= 0) or max_abs(d.imag) > tol:
            raise InvariantViolation(f"A_{c.n},{m} not upper triangular with positive diagonal")
    if c.G.size:
        mask = np.tril(np.ones(c.G.shape, bool))
        if max_abs(c.G[mask]) > tol or np.any(np.diag(c.G, 1).real <= 0):
            raise InvariantViolation(f"Gamma_{c.n},{m} violates its zero pattern")
    if c.G1.size:
        mask = np.tril(np.ones(c.G1.shape, bool), -1)
        if max_abs(c.G1[mask]) > tol or np.any(np.diag(c.G1).real <= 0):
            raise InvariantViolation(f"Gamma1_{c.n},{m} violates its zero pattern")
    for name in ("E", "K", "K1"):
        X = getattr(c, name)
        if X.size and np.linalg.norm(X, 2) >= 1.0:
            raise InvariantViolation(f"{name}_{c.n},{m} is not a contraction")


def extract_coefficients(sys, n, m, check=True):
    """Recurrence matrices at level (n, m), lex family with revlex family in ``.tilde``.

    Raises
    ------
    MissingLevel
        A level needed by a defining inner product is absent from ``sys``.
    InvariantViolation
        A structural property (symmetry, triangularity, contraction) fails.
    """
    lex = _lex_coefficients(sys, n, m)
    til = _lex_coefficients(sys.T, m, n)
    if check:
        check_invariants(lex)
        check_invariants(til)
    return CoeffLevel(**{k: getattr(lex, k) for k in ("n", "m") + NAMES}, tilde=til)


class CoeffSet:
    """Coefficient levels for every (n, m) of a rectangle, with a transposed view."""

    def __init__(self, levels, N, M):
        self.levels = levels
        self.N, self.M = N, M
        self._T = None

    @classmethod
    def build(cls, sys, check=True):
        levels = {(n, m): extract_coefficients(sys, n, m, check)
                  for n in range(sys.N + 1) for m in range(sys.M + 1)}
        return cls(levels, sys.N, sys.M)

    def __getitem__(self, key):
        try:
            return self.levels[key]
        except KeyError:
            raise MissingLevel(f"coefficients at {key} not available") from None

    def __contains__(self, key):
        return key in self.levels

    def get(self, name, n, m):
        return getattr(self[(n, m)], name)

    def tget(self, name, n, m):
        return getattr(self[(n, m)].tilde, name)

    @property
    def T(self):
        if self._T is None:
            levels = {}
            for (n, m), c in self.levels.items():
                t = c.tilde
                levels[(m, n)] = CoeffLevel(**{k: getattr(t, k) for k in ("n", "m") + NAMES},
                                            tilde=CoeffLevel(**{k: getattr(c, k)
                                                                for k in ("n", "m") + NAMES}))
            self._T = CoeffSet(levels, self.M, self.N)
            self._T._T = self
        return self._T


def _levels(N, M):
    return [(n, m) for n in range(N + 1) for m in range(M + 1)]


def _inv_upper(X):
    d = np.diag(X)
    if d.size and np.min(np.abs(d)) < 1e-14:
        raise SingularLeadingCoefficient("leading coefficient matrix is singular")
    return solve_triangular(X, np.eye(X.shape[0]), lower=False)


# --------------------------------------------------------------------------
# recurrences


def _recurrence_terms(sys, cs, n, m):
    c = cs[(n, m)]
    P = sys.phi(n, m)
    out = {}
    if n >= 1:
        zprev = poly.shift(sys.phi(n - 1, m), dz=1)
        out["E1"] = poly.sub(poly.matmul(c.A, P),
                             poly.sub(zprev, poly.matmul(c.E, sys.rev(n - 1, m))))
        Ainv_T = solve_triangular(c.A.T, np.eye(m + 1), lower=True)
        coef = c.A.conj().T @ c.E @ Ainv_T
        out["E2"] = poly.sub(poly.add(P, poly.matmul(coef, sys.rev(n, m))),
                             poly.matmul(c.A.conj().T, zprev))
    else:
        out["E1"] = out["E2"] = None
    if m >= 1:
        out["KK"] = poly.add(poly.sub(poly.matmul(c.G, P), sys.phi(n, m - 1)),
                             poly.matmul(c.K, sys.phit(n - 1, m)))
        out["K1"] = poly.add(poly.sub(poly.matmul(c.G1, P), poly.shift(sys.phi(n, m - 1), dw=1)),
                             poly.matmul(c.K1, sys.revt(n - 1, m)))
    else:
        out["KK"] = out["K1"] = None
    out["II"] = poly.sub(P, poly.add(poly.matmul(c.I, sys.phit(n, m)),
                                     poly.matmul(c.G.conj().T, sys.phi(n, m - 1))))
    out["II1"] = poly.sub(sys.rev(n, m), poly.add(poly.matmul(c.I1, sys.phit(n, m)),
                                                 poly.matmul(c.G1.T, sys.rev(n, m - 1))))
    return out


def verify_recurrences(sys, cs, rect=None, tol=DEFAULT_TOL):
    """Coefficient-wise residuals of the six recurrences and their tilde analogs."""
    N, M = rect or (cs.N, cs.M)
    report = ResidualReport()
    for prefix, s, c, (NN, MM) in (("", sys, cs, (N, M)), ("~", sys.T, cs.T, (M, N))):
        for n, m in _levels(NN, MM):
            level = (n, m) if not prefix else (m, n)
            for rel, D in _recurrence_terms(s, c, n, m).items():
                if D is None:
                    report.vacuous(prefix + rel, level, tol)
                else:
                    report.add(prefix + rel, level, max_abs(D), tol)
    return report


# --------------------------------------------------------------------------
# algebraic identities


def _algebraic_terms(c, n, m):
    eye = lambda k: np.eye(k)  # noqa: E731
    t = c.tilde
    out = {
        "tK=K^H": max_abs(t.K - c.K.conj().T),
        "tI=I^H": max_abs(t.I - c.I.conj().T),
        "tI1=I1^T": max_abs(t.I1 - c.I1.T),
        "tK1=K1^T": max_abs(t.K1 - c.K1.T),
        "AA^H=I-EE^H": max_abs(c.A @ c.A.conj().T - (eye(m + 1) - c.E @ c.E.conj().T)) if n else None,
        "GG^H=I-KK^H": max_abs(c.G @ c.G.conj().T - (eye(m) - c.K @ c.K.conj().T)) if m else None,
        "G1G1^H=I-K1K1^H": max_abs(c.G1 @ c.G1.conj().T - (eye(m) - c.K1 @ c.K1.conj().T)) if m else None,
        "II^H+G^HG=I": max_abs(c.I @ c.I.conj().T + c.G.conj().T @ c.G - eye(m + 1)),
        "I1I1^H+G1^TG1*=I": max_abs(c.I1 @ c.I1.conj().T + c.G1.T @ c.G1.conj() - eye(m + 1)),
    }
    return out


def verify_algebraic_identities(cs, rect=None, tol=DEFAULT_TOL):
    """Residuals of the tilde/lex conjugation identities and the Cholesky-type identities."""
    N, M = rect or (cs.N, cs.M)
    report = ResidualReport()
    for prefix, c, (NN, MM) in (("", cs, (N, M)), ("~", cs.T, (M, N))):
        for n, m in _levels(NN, MM):
            level = (n, m) if not prefix else (m, n)
            for rel, r in _algebraic_terms(c[(n, m)], n, m).items():
                if prefix and rel.startswith(("tK", "tI")):
                    continue
                if r is None:
                    report.vacuous(prefix + rel, level, tol)
                else:
                    report.add(prefix + rel, level, r, tol)
    return report


# --------------------------------------------------------------------------
# pointwise formulas


def pointwise_gamma(sys, n, m):
    """Gamma and Gamma^1 at (n, m) from the leading z-coefficients of the lex levels."""
    lead_hi = sys.view(n, m).leading
    lead_lo = sys.view(n, m - 1).leading
    inv = _inv_upper(lead_hi)
    return lead_lo @ shift_up(m) @ inv, lead_lo @ shift_down(m) @ inv


def pointwise_I(sys, n, m):
    """``I`` and ``I^1`` at (n, m) from w-coefficients of Phi and the revlex leading coefficient."""
    L = sys.view(n, m).secondary
    inv = _inv_upper(sys.viewt(n, m).leading)
    return L[m] @ inv, L[0].conj() @ anti_identity(n + 1) @ inv


def pointwise_K(sys, n, m, G=None, G1=None, I=None, I1=None):
    """kappa and kappa^1 at (n, m) from Gamma, I and the revlex leading coefficients."""
    if G is None:
        G, G1 = pointwise_gamma(sys, n, m)
    if I is None:
        I, I1 = pointwise_I(sys, n, m)
    hi = sys.viewt(n, m).leading
    lo_inv = _inv_upper(sys.viewt(n - 1, m).leading)
    F = hi @ shift_up(n).T @ lo_inv
    F1 = hi @ shift_down(n).T @ lo_inv
    return -G @ I @ F, -G1 @ I1.conj() @ F1.conj()


def verify_pointwise_formulas(sys, cs, rect=None, tol=DEFAULT_TOL):
    """Compare inner-product coefficients against their pointwise expressions."""
    N, M = rect or (cs.N, cs.M)
    report = ResidualReport()
    for prefix, s, c, (NN, MM) in (("", sys, cs, (N, M)), ("~", sys.T, cs.T, (M, N))):
        for n, m in _levels(NN, MM):
            level = (n, m) if not prefix else (m, n)
            cl = c[(n, m)]
            I, I1 = pointwise_I(s, n, m)
            report.add(prefix + "I:pointwise", level, max_abs(cl.I - I), tol)
            report.add(prefix + "I1:pointwise", level, max_abs(cl.I1 - I1), tol)
            if m == 0:
                for rel in ("G:pointwise", "G1:pointwise", "K:pointwise", "K1:pointwise"):
                    report.vacuous(prefix + rel, level, tol)
                continue
            G, G1 = pointwise_gamma(s, n, m)
            report.add(prefix + "G:pointwise", level, max_abs(cl.G - G), tol)
            report.add(prefix + "G1:pointwise", level, max_abs(cl.G1 - G1), tol)
            if n == 0:
                report.vacuous(prefix + "K:pointwise", level, tol)
                report.vacuous(prefix + "K1:pointwise", level, tol)
                continue
            K, K1 = pointwise_K(s, n, m, cl.G, cl.G1, cl.I, cl.I1)
            report.add(prefix + "K:pointwise", level, max_abs(cl.K - K), tol)
            report.add(prefix + "K1:pointwise", level, max_abs(cl.K1 - K1), tol)
    return report


# --------------------------------------------------------------------------
# relations mixing neighbouring levels


def column_step_rhs(cs, n, m):
    """Right-hand side of ``E_{n,m} = G E_{n,m+1} G1^T + K K1^T`` with column n-1 data."""
    up = cs[(n - 1, m + 1)]
    return up.G @ cs.get("E", n, m + 1) @ up.G1.T + up.K @ up.K1.T


def _mixed_terms(cs, n, m, N, M):
    out = {}
    if n >= 1 and m + 1 <= M:
        out["E:column-step"] = max_abs(cs.get("E", n, m) - column_step_rhs(cs, n, m))
    else:
        out["E:column-step"] = None
    if n >= 1 and m >= 1:
        c, prev, low = cs[(n, m)], cs[(n - 1, m)], cs[(n, m - 1)]
        out["K:from-E"] = max_abs(prev.G @ c.E @ prev.I1
                                   - (low.A @ c.K - prev.K @ prev.tilde.G1))
        out["K1:from-E"] = max_abs(prev.I.conj().T @ c.E @ prev.G1.T
                                    - (c.K1.T @ low.A.T - prev.tilde.G.conj().T @ prev.K1.T))
        out["E:Gamma-left"] = max_abs(prev.G @ c.E
                             - (low.A @ c.K @ prev.I1.conj().T + low.E @ prev.G1.conj()))
        out["E:Gamma1-right"] = max_abs(c.E @ prev.G1.T
                             - (prev.I @ c.K1.T @ low.A.T + prev.G.conj().T @ low.E))
    else:
        out.update({"K:from-E": None, "K1:from-E": None, "E:Gamma-left": None, "E:Gamma1-right": None})
    return out


def verify_mixed_relations(cs, rect=None, tol=DEFAULT_TOL):
    """Residuals of the relations linking coefficients of adjacent levels."""
    N, M = rect or (cs.N, cs.M)
    report = ResidualReport()
    for tilde, c, (NN, MM) in ((False, cs, (N, M)), (True, cs.T, (M, N))):
        for n, m in _levels(NN, MM):
            level = (m, n) if tilde else (n, m)
            for rel, r in _mixed_terms(c, n, m, NN, MM).items():
                name = "~" + rel if tilde else rel
                if r is None:
                    report.vacuous(name, level, tol)
                else:
                    report.add(name, level, r, tol)
    return report


def verify_zero_propagation(cs, rect=None, eps=1e-9, tol=1e-8, const=None):
    """Zero propagation between E, the first column of K1, and the level below.

    Wherever ``max|E_{i,j}| <= eps`` the first column of ``K1_{i,j}`` must be
    ``<= tol``; when also ``max|K_{i-1,j} K1_{i-1,j}^T| <= eps`` then
    ``max|E_{i,j-1}| <= tol``.  With ``const`` given the bound becomes ``const * eps``.
    """
    N, M = rect or (cs.N, cs.M)
    bound = tol if const is None else const * eps
    report = ResidualReport()
    for tilde, c, (NN, MM) in ((False, cs, (N, M)), (True, cs.T, (M, N))):
        pre = "~" if tilde else ""
        for i, j in _levels(NN, MM):
            level = (j, i) if tilde else (i, j)
            if i == 0:
                continue
            E = c.get("E", i, j)
            if max_abs(E) > eps:
                continue
            K1 = c.get("K1", i, j)
            if K1.size:
                report.add(pre + "zero:K1col", level, max_abs(K1[:, 0]), bound)
            if j >= 1:
                prev = c[(i - 1, j)]
                if max_abs(prev.K @ prev.K1.T) <= eps:
                    report.add(pre + "zero:Elow", level, max_abs(c.get("E", i, j - 1)), bound)
    return report


def verify_matrix_opuc(sys, m, nmax, tol=DEFAULT_TOL):
    """``<Phi_{i,m}, Phi_{j,m}> = delta_ij I`` for ``0 <= i, j <= nmax``."""
    report = ResidualReport()
    for i in range(nmax + 1):
        for j in range(nmax + 1):
            G = inner_product(sys.phi(i, m), sys.phi(j, m), sys.table)
            target = np.eye(m + 1) if i == j else 0.0
            report.add("matrix-opuc" if i == j else "matrix-opuc-cross", (i, j), max_abs(G - target), tol)
    return report


def verify_orthonormality(sys, tol=DEFAULT_TOL):
    report = ResidualReport()
    for prefix, store in (("", sys.lex), ("~", sys.revlex)):
        for (n, m), lv in store.items():
            P = lv.poly
            report.add(prefix + "orthonormal", (n, m),
                       max_abs(inner_product(P, P, sys.table) - np.eye(P.shape[0])), tol)
    return report


def verify_all(sys, cs, tol=DEFAULT_TOL):
    report = ResidualReport()
    report.extend(verify_orthonormality(sys, tol))
    report.extend(verify_recurrences(sys, cs, tol=tol))
    report.extend(verify_algebraic_identities(cs, tol=tol))
    report.extend(verify_pointwise_formulas(sys, cs, tol=tol))
    report.extend(verify_mixed_relations(cs, tol=tol))
    for m in range(sys.M + 1):
        report.extend(verify_matrix_opuc(sys, m, sys.N, tol))
    return report


# --------------------------------------------------------------------------
# one variable


def one_dim_verblunsky(c):
    """Verblunsky coefficients of a moment sequence ``c_0..c_N`` on the circle.

    Levinson recursion on the monic polynomials
    ``Phi_n = z Phi_{n-1} - alpha_n rev(Phi_{n-1})``, with
    ``c_k = integral of exp(-i k theta)``.

    Returns
    -------
    alpha, a : ndarray
        ``alpha_1..alpha_N`` and ``a_n = (1 - |alpha_n|^2)^(-1/2)``.
    """
    c = np.asarray(c, dtype=complex)
    if c.size == 0 or c[0].real <= 0:
        raise NotPositiveDefinite("c_0 must be positive")
    monic = np.array([1.0 + 0j])
    d = c[0].real
    alphas = []
    for n in range(1, c.size):
        # <z Phi_{n-1}, 1> = sum_i Phi[i] c_{-(i+1)}
        num = np.sum(monic * np.conj(c[1 : n + 1]))
        alpha = num / d
        if abs(alpha) >= 1.0:
            raise NotPositiveDefinite(f"|alpha_{n}| >= 1")
        rev = monic[::-1].conj()
        monic = np.concatenate([[0j], monic]) - alpha * np.concatenate([rev, [0j]])
        d *= 1.0 - abs(alpha) ** 2
        alphas.append(alpha)
    alphas = np.array(alphas)
    return alphas, 1.0 / np.sqrt(1.0 - np.abs(alphas) ** 2)
