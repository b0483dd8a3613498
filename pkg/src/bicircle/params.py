"""The scalar parameter field ``u[i, j]`` and the Bernstein-Szego zero pattern.

Authoritative definitions, for ``n, m > 0``:

* ``u[-n, -m]`` is the (1, 1) entry of ``K1_{n,m}``;
* ``u[-n, m] = e^T (Phi^{m-1}_{n,n})^{-1} K_{n,m} ((tPhi^{n-1}_{m,m})^H)^{-1} e``;
* ``u[i, 0]`` and ``u[0, j]`` come from the constant and leading terms of the
  one-row levels ``Phi_{i,0}`` and ``tPhi_{0,j}``;
* ``u[0, 0] = c[0, 0]`` (a convention);

and ``u[-i, -j] = conj(u[i, j])`` throughout.
"""
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .coeffs import one_dim_verblunsky
from .errors import ConstraintViolation, MissingLevel
from .kernel import anti_identity, last_unit, max_abs, shift_down, shift_up, solve_triangular
from .moments import inner_product
from .reports import DEFAULT_TOL, ResidualReport

ZERO_TOL = 1e-8


class ParameterField:
    """Sparse field ``u[i, j]`` with the ``i >= 0`` half stored.

    For ``i == 0`` only ``j >= 0`` is stored.  Reads of the other half are
    conjugated, so the symmetry holds by construction.
    """

    def __init__(self, entries=None):
        self._u = {}
        for (i, j), v in (entries or {}).items():
            self[i, j] = v

    @staticmethod
    def _canonical(i, j, v=None):
        if i < 0 or (i == 0 and j < 0):
            return (-i, -j), (None if v is None else np.conj(v)), True
        return (i, j), v, False

    def __setitem__(self, key, value):
        k, v, _ = self._canonical(*key, complex(value))
        self._u[k] = complex(v)

    def __getitem__(self, key):
        k, _, flip = self._canonical(*key)
        try:
            v = self._u[k]
        except KeyError:
            raise MissingLevel(f"parameter u{key} not available") from None
        return complex(np.conj(v)) if flip else v

    def __contains__(self, key):
        return self._canonical(*key)[0] in self._u

    def get(self, key, default=None):
        return self[key] if key in self else default

    def items(self):
        return sorted(self._u.items())

    def __len__(self):
        return len(self._u)

    def merge(self, other):
        out = ParameterField()
        out._u = {**self._u, **other._u}
        return out


def _inv_upper(X):
    return solve_triangular(X, np.eye(X.shape[0]), lower=False)


def kappa_parameter(sys, K, n, m):
    """``u[-n, m]`` from the kappa matrix at (n, m) and the leading coefficients."""
    lo = sys.view(n, m - 1).leading
    tl = sys.viewt(n - 1, m).leading
    return complex(last_unit(m) @ _inv_upper(lo) @ K @ np.linalg.inv(tl.conj().T) @ last_unit(n))


def kappa_parameter_scaled(sys, K, n, m):
    k = sys.lex[(n, m - 1)].leading()[-1].real
    kt = sys.revlex[(n - 1, m)].leading()[-1].real
    return complex(K[-1, -1] / (k * kt))


def constant_term_parameter(sys, i):
    """``u[i, 0] = -phi_{i,0}(0) / (leading coefficient)`` from the single-row level (i, 0)."""
    P = sys.phi(i, 0)[0, :, 0]
    return complex(-P[0] / P[i])


def extract_parameters(sys, cs, rect=None, check=True):
    """Parameter field on ``0 <= i <= N``, ``|j| <= M`` from the coefficient set.

    Raises
    ------
    ConstraintViolation
        A parameter breaks ``|u| < 1`` or the scaled bound on ``u[n, -m]``.
    """
    N, M = rect or (cs.N, cs.M)
    u = ParameterField()
    u[0, 0] = sys.table(0, 0).real
    for i in range(1, N + 1):
        u[i, 0] = constant_term_parameter(sys, i)
    for j in range(1, M + 1):
        u[0, j] = constant_term_parameter(sys.T, j)
    for n in range(1, N + 1):
        for m in range(1, M + 1):
            c = cs[(n, m)]
            u[-n, -m] = c.K1[0, 0]
            u[-n, m] = kappa_parameter(sys, c.K, n, m)
    if check:
        check_constraints(sys, u, N, M)
    return u


def check_constraints(sys, u, N, M):
    if u[0, 0].real <= 0:
        raise ConstraintViolation("u[0, 0] must be positive")
    for (i, j), v in u.items():
        if (i, j) != (0, 0) and abs(v) >= 1.0 and not (j < 0):
            raise ConstraintViolation(f"|u[{i}, {j}]| = {abs(v):.3g} >= 1")
    for n in range(1, N + 1):
        for m in range(1, M + 1):
            k = sys.lex[(n, m - 1)].leading()[-1].real
            kt = sys.revlex[(n - 1, m)].leading()[-1].real
            if k * kt * abs(u[n, -m]) >= 1.0:
                raise ConstraintViolation(f"scaled |u[{n}, {-m}]| >= 1")


# --------------------------------------------------------------------------
# alternative routes


def top_coefficient_parameter(sys, n, m):
    """``u[-n, m]`` from the top w-coefficient of ``Phi_{n,m}`` (no kappa needed)."""
    L = sys.view(n, m).secondary[m]
    tl = sys.viewt(n - 1, m).leading
    return complex(-(last_unit(m + 1) @ _inv_upper(sys.view(n, m).leading) @ L
                     @ shift_up(n).T @ np.linalg.inv(tl.conj().T @ tl) @ last_unit(n)))


def bottom_coefficient_parameter(sys, n, m):
    """``(K1_{n,m})[0, 0]`` from the w^0-coefficient of ``Phi_{n,m}``."""
    lo = sys.view(n, m - 1).leading
    hi = sys.view(n, m).leading
    L0 = sys.view(n, m).secondary[0]
    tl = sys.viewt(n - 1, m).leading
    X = lo @ shift_down(m) @ _inv_upper(hi) @ L0 @ anti_identity(n + 1) @ shift_down(n).T
    return complex(-(X @ np.linalg.inv(tl.conj()))[0, 0])


def shifted_inner_parameter(sys, n, m, shift=True):
    """``<w phi^{m-1}_{n,m-1}, rev(tphi^{n-1}_{n-1,m})>``; ``shift=False`` drops the factor w."""
    top = sys.phi(n, m - 1)[:1]
    if shift:
        top = poly.shift(top, dw=1)
    return complex(inner_product(top, sys.revt(n - 1, m)[:1], sys.table)[0, 0])


def monic_inner_parameter(sys, n, m):
    """Inner product of the monic ``phi^0_{n,m-1}`` and monic ``tphi^0_{n-1,m}``."""
    a = sys.phi(n, m - 1)[-1:]
    b = sys.phit(n - 1, m)[-1:]
    a = a / a[0, n, 0]
    b = b / b[0, 0, m]
    return complex(inner_product(a, b, sys.table)[0, 0])


def crosscheck_parameters(sys, u, rect=None, tol=DEFAULT_TOL):
    """Recompute every parameter by the alternative routes and report the discrepancies.

    The pairing without the factor w (``u[-n,-m]:unshifted-inner``) does not
    reproduce ``u[-n, -m]``; it is listed as an advisory entry so the
    discrepancy stays visible without failing the report.
    """
    N, M = rect or (sys.N, sys.M)
    report = ResidualReport()
    for n in range(1, N + 1):
        for m in range(1, M + 1):
            c = inner_product(poly.shift(sys.phi(n, m - 1), dw=1), sys.revt(n - 1, m), sys.table)
            K = inner_product(sys.phi(n, m - 1), sys.phit(n - 1, m), sys.table)
            report.add("u[-n,-m]:inner-product", (n, m), abs(c[0, 0] - u[-n, -m]), tol)
            report.add("u[-n,-m]:shifted-inner", (n, m), abs(shifted_inner_parameter(sys, n, m) - u[-n, -m]), tol)
            report.add("u[-n,-m]:bottom-coefficient", (n, m), abs(bottom_coefficient_parameter(sys, n, m) - u[-n, -m]), tol)
            report.add("u[-n,m]:kappa-scaled", (n, m), abs(kappa_parameter_scaled(sys, K, n, m) - u[-n, m]), tol)
            report.add("u[-n,m]:monic-inner", (n, m), abs(monic_inner_parameter(sys, n, m) - u[-n, m]), tol)
            report.add("u[-n,m]:top-coefficient", (n, m), abs(top_coefficient_parameter(sys, n, m) - u[-n, m]), tol)
            report.add("u[-n,-m]:unshifted-inner", (n, m),
                       abs(shifted_inner_parameter(sys, n, m, shift=False) - u[-n, -m]), tol, advisory=True)
    row = np.array([sys.table(k, 0) for k in range(N + 1)])
    col = np.array([sys.table(0, j) for j in range(M + 1)])
    if N:
        alpha, _ = one_dim_verblunsky(row)
        for i in range(1, N + 1):
            report.add("u[i,0]:levinson", (i, 0), abs(alpha[i - 1] - u[i, 0]), tol)
    if M:
        alpha, _ = one_dim_verblunsky(col)
        for j in range(1, M + 1):
            report.add("u[0,j]:levinson", (0, j), abs(alpha[j - 1] - u[0, j]), tol)
    return report


# --------------------------------------------------------------------------
# Bernstein-Szego detection


@dataclass
class BSReport:
    base: tuple
    rect: tuple
    tol: float
    conditions: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r <= self.tol for r in self.conditions.values()) and \
            all(r <= self.tol for r in self.derived.values())

    def to_json(self):
        return {"base": list(self.base), "rect": list(self.rect), "tol": self.tol,
                "conditions": {k: {"residual": v, "pass": v <= self.tol}
                               for k, v in self.conditions.items()},
                "derived": {k: {"residual": v, "pass": v <= self.tol}
                            for k, v in self.derived.items()},
                "pass": self.passed}

    def summary(self):
        lines = [f"base {self.base}, checked through {self.rect}"]
        for group in (self.conditions, self.derived):
            for k, v in group.items():
                lines.append(f"  {'PASS' if v <= self.tol else 'FAIL'} {k:24s} {v:.3e}")
        lines.append("Bernstein-Szego: " + ("yes" if self.passed else "no"))
        return "\n".join(lines)


def _umax(u, keys):
    vals = [abs(u[k]) for k in keys if k in u]
    return max(vals, default=0.0)


def detect_bernstein_szego(cs, u, base, tol=ZERO_TOL, rect=None):
    """Evaluate the three zero-pattern conditions at ``base`` over the available rectangle.

    (a) ``K_{n,j}``, tilde ``E_{n-1,j+1}`` and ``u[n, j+1]`` vanish for ``j >= m``;
    (b) ``K_{i,m}``, ``E_{i,m-1}`` and ``u[i, m]`` vanish for ``i > n``;
    (c) ``u[i, j]`` vanishes for ``|i| > n``, ``j > m``.
    """
    n, m = base
    N, M = rect or (cs.N, cs.M)
    rep = BSReport((n, m), (N, M), tol)
    a = [max_abs(cs.get("K", n, j)) for j in range(m, M + 1)]
    if n >= 1:
        a += [max_abs(cs.tget("E", n - 1, j + 1)) for j in range(m, M)]
    a_u = _umax(u, [(n, j + 1) for j in range(m, M)])
    rep.conditions["(a) K,tE"] = max(a, default=0.0)
    rep.conditions["(a) u"] = a_u
    b = [max_abs(cs.get("K", i, m)) for i in range(n + 1, N + 1)]
    if m >= 1:
        b += [max_abs(cs.get("E", i, m - 1)) for i in range(n + 1, N + 1)]
    rep.conditions["(b) K,E"] = max(b, default=0.0)
    rep.conditions["(b) u"] = _umax(u, [(i, m) for i in range(n + 1, N + 1)])
    rep.conditions["(c) u"] = _umax(u, [(s * i, j) for i in range(n + 1, N + 1)
                                        for j in range(m + 1, M + 1) for s in (1, -1)])
    rep.derived["u[-n, j], j>=m"] = _umax(u, [(-n, j) for j in range(max(m, 1), M + 1)] if n else [])
    rep.derived["u[-i, m], i>n"] = _umax(u, [(-i, m) for i in range(n + 1, N + 1)])
    rep.derived["u[n-1, j+1], j>=m"] = _umax(u, [(n - 1, j + 1) for j in range(m, M)] if n else [])
    rep.derived["u[i, m-1], i>n"] = _umax(u, [(i, m - 1) for i in range(n + 1, N + 1)] if m else [])
    return rep
