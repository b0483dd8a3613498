"""Extension of Bernstein-Szego data outside the base rectangle.

Given the lex and revlex levels on column ``n`` (rows ``0..m``) and the
column-``n`` coefficient matrices of a Bernstein-Szego measure of degree
(n, m), the levels of every column ``i > n`` are rebuilt without touching a
moment table:

* ``E_{i,m} = 0`` and the lower ``E_{i,j}`` follow from the column ``i-1``
  coefficients, ``E_{i,j} = G E_{i,j+1} G1^T + K K1^T``; each gives
  ``A_{i,j}`` by an outer Cholesky factor and ``Phi_{i,j}`` by the forward
  recurrence;
* ``tPhi_{i,m}`` is ``tPhi_{i-1,m}`` with ``phi^m_{i,m}`` stacked on top, and
  the lower ``tPhi_{i,j}`` come from the inverse (w-direction) Szego step
  with ``B = -tPhi(0) J conj(lead)^{-1}`` and ``tA^H tA = I - B B^H``;
* the column ``i`` coefficients then follow from the pointwise formulas.

Growth in ``m`` is the same procedure applied to the transposed measure.
"""
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .coeffs import CoeffSet, pointwise_I, pointwise_K, pointwise_gamma
from .errors import BaseNotBS
from .kernel import anti_identity, factor_gram_upper, factor_outer_upper, max_abs, shift_up, solve_triangular
from .moments import compute_moments
from .ortho import OrthoLevel, OrthoSystem
from .params import ParameterField, extract_parameters, top_coefficient_parameter, bottom_coefficient_parameter, constant_term_parameter

TOL_DIV = 1e-9
TOL_BASE = 1e-8
TOL_EXTEND = 1e-6


@dataclass(frozen=True)
class BaseData:
    """Column-``n`` input of the extension: polynomials and coefficient matrices.

    ``lex[j]``/``tilde[j]`` are the coefficient arrays of ``Phi_{n,j}`` and
    ``tPhi_{n,j}``; ``G, G1, K, K1`` map ``j`` (1..m) to the matrices at (n, j).
    """

    n: int
    m: int
    lex: dict
    tilde: dict
    G: dict
    G1: dict
    K: dict
    K1: dict

    @classmethod
    def from_system(cls, sys, cs, n, m):
        return cls(n, m,
                   lex={j: sys.phi(n, j) for j in range(m + 1)},
                   tilde={j: sys.phit(n, j) for j in range(m + 1)},
                   G={j: cs.get("G", n, j) for j in range(1, m + 1)},
                   G1={j: cs.get("G1", n, j) for j in range(1, m + 1)},
                   K={j: cs.get("K", n, j) for j in range(1, m + 1)},
                   K1={j: cs.get("K1", n, j) for j in range(1, m + 1)})


@dataclass
class ExtensionState:
    """Everything produced by :func:`extend_strip`, keyed by level (i, j) of the original measure."""

    base: tuple
    target: int
    direction: str
    system: OrthoSystem
    E: dict = field(default_factory=dict)
    A: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)
    At: dict = field(default_factory=dict)
    coeffs: dict = field(default_factory=dict)
    division_residuals: list = field(default_factory=list)

    def levels(self):
        """Levels strictly outside the base column/row."""
        n, m = self.base
        if self.direction == "n":
            return [(i, j) for i in range(n + 1, self.target + 1) for j in range(m + 1)]
        return [(i, j) for j in range(m + 1, self.target + 1) for i in range(n + 1)]


def check_base(base, tol=TOL_BASE):
    """Raise :class:`BaseNotBS` unless ``K_{n,m} = 0`` and ``phi^m_{n,m} = tphi^n_{n,m}``."""
    n, m = base.n, base.m
    if m >= 1 and max_abs(base.K[m]) > tol:
        raise BaseNotBS(f"K_{n},{m} = {max_abs(base.K[m]):.3e} is not zero")
    diff = poly.max_diff(base.lex[m][:1], base.tilde[m][:1])
    if diff > tol:
        raise BaseNotBS(f"leading lex and revlex polynomials differ by {diff:.3e}")


def _lead_inv(X):
    return solve_triangular(X, np.eye(X.shape[0]), lower=False)


def _grow_columns(base, target, tol_div):
    n, m = base.n, base.m
    lex = {(n, j): OrthoLevel.from_poly(base.lex[j], n, j, "lex") for j in range(m + 1)}
    til = {(n, j): OrthoLevel.from_poly(base.tilde[j], n, j, "revlex") for j in range(m + 1)}
    sys = OrthoSystem(None, target, m, lex, til)
    out = dict(E={}, A={}, B={}, At={}, coeffs={}, division_residuals=[])
    prev = {j: dict(G=base.G[j], G1=base.G1[j], K=base.K[j], K1=base.K1[j]) for j in range(1, m + 1)}
    for i in range(n + 1, target + 1):
        # lex column i, top row down
        E = np.zeros((m + 1, m + 1), dtype=complex)
        for j in range(m, -1, -1):
            if j < m:
                c = prev[j + 1]
                E = c["G"] @ E @ c["G1"].T + c["K"] @ c["K1"].T
            A = factor_outer_upper(np.eye(j + 1) - E @ E.conj().T)
            rhs = poly.sub(poly.shift(sys.phi(i - 1, j), dz=1), poly.matmul(E, sys.rev(i - 1, j)))
            P = solve_triangular(A, rhs.reshape(j + 1, -1), lower=False).reshape(rhs.shape)
            lex[(i, j)] = OrthoLevel.from_poly(P, i, j, "lex")
            out["E"][(i, j)], out["A"][(i, j)] = E, A
        # revlex column i: stack, then step down in w
        top = sys.phi(i, m)[:1]
        T = np.concatenate([top, poly.pad_to(sys.phit(i - 1, m), i, m)], axis=0)
        til[(i, m)] = OrthoLevel.from_poly(T, i, m, "revlex")
        for j in range(m, 0, -1):
            view = sys.viewt(i, j)
            B = -view.primary[0] @ anti_identity(i + 1) @ np.linalg.inv(view.leading.conj())
            At = factor_gram_upper(np.eye(i + 1) - B @ B.conj().T)
            AtH_inv = np.linalg.inv(At.conj().T)
            S = poly.matmul(AtH_inv, poly.add(sys.phit(i, j), poly.matmul(B, sys.revt(i, j))))
            low, res = poly.divide_w(S, tol_div)
            out["division_residuals"].append(((i, j), res))
            til[(i, j - 1)] = OrthoLevel.from_poly(low, i, j - 1, "revlex")
            out["B"][(i, j)], out["At"][(i, j)] = B, At
        # column i coefficients
        cur = {}
        for j in range(1, m + 1):
            if j == m:
                G, G1 = shift_up(m), pointwise_gamma(sys, i, m)[1]
            else:
                G, G1 = pointwise_gamma(sys, i, j)
            I, I1 = pointwise_I(sys, i, j)
            K, K1 = pointwise_K(sys, i, j, G, G1, I, I1)
            if j == m:
                K = np.zeros_like(K)
            cur[j] = dict(G=G, G1=G1, K=K, K1=K1, I=I, I1=I1)
        out["coeffs"].update({(i, j): c for j, c in cur.items()})
        prev = cur
    return sys, out


def extend_strip(base, target, direction="n", tol_div=TOL_DIV, tol_base=TOL_BASE):
    """Rebuild all levels of columns ``n+1..target`` (or rows ``m+1..target``).

    ``base`` must be a :class:`BaseData` in the orientation of the growth:
    column data for ``direction='n'``; for ``direction='m'`` pass
    ``BaseData.from_system(sys.T, cs.T, m, n)`` (see :func:`base_for`).
    No moments are consumed.

    Raises
    ------
    BaseNotBS
        The base column does not look like Bernstein-Szego data.
    DivisionResidual
        A w-division left a remainder above ``tol_div``.
    NotPositiveDefinite
        ``I - E E^H`` or ``I - B B^H`` lost definiteness.
    """
    if direction not in ("n", "m"):
        raise ValueError("direction must be 'n' or 'm'")
    check_base(base, tol_base)
    sys, out = _grow_columns(base, target, tol_div)
    if direction == "n":
        return ExtensionState((base.n, base.m), target, "n", sys, **out)
    swap = lambda d: {(j, i): v for (i, j), v in d.items()}  # noqa: E731
    state = ExtensionState((base.m, base.n), target, "m", sys.T,
                           E=swap(out["E"]), A=swap(out["A"]), B=swap(out["B"]), At=swap(out["At"]),
                           coeffs=swap(out["coeffs"]),
                           division_residuals=[((j, i), r) for (i, j), r in out["division_residuals"]])
    return state


def base_for(sys, cs, base, direction="n"):
    """:class:`BaseData` for growth in ``direction`` from a directly computed system."""
    n, m = base
    if direction == "n":
        return BaseData.from_system(sys, cs, n, m)
    return BaseData.from_system(sys.T, cs.T, m, n)


def reconstruct_outer_parameters(state):
    """Parameters of the extended strip from the extended polynomials alone.

    For growth in n: ``u[-i, j]`` by the top-coefficient formula, ``u[-i, -j]``
    by the bottom-coefficient formula and ``u[i, 0]`` from the constant term,
    for ``i > n`` and ``1 <= j <= m``.  Growth in m uses the transposed system.
    """
    sys = state.system if state.direction == "n" else state.system.T
    n, m = state.base if state.direction == "n" else state.base[::-1]
    u = ParameterField()
    for i in range(n + 1, state.target + 1):
        u[i, 0] = constant_term_parameter(sys, i)
        for j in range(1, m + 1):
            u[-i, j] = top_coefficient_parameter(sys, i, j)
            u[-i, -j] = bottom_coefficient_parameter(sys, i, j)
    if state.direction == "n":
        return u
    return ParameterField({(j, i): v for (i, j), v in u.items()})


# --------------------------------------------------------------------------
# round trip


@dataclass
class RoundTripReport:
    base: tuple
    target: tuple
    tol: float
    level_residuals: list = field(default_factory=list)
    parameter_residuals: list = field(default_factory=list)
    zero_residuals: list = field(default_factory=list)
    division_residual: float = 0.0
    density_residual: float = 0.0
    phase_residual: float = 0.0
    param_tol: float = None
    density_tol: float = None

    @property
    def max_level_residual(self):
        return max((r["residual"] for r in self.level_residuals), default=0.0)

    @property
    def max_parameter_residual(self):
        return max((r["residual"] for r in self.parameter_residuals), default=0.0)

    @property
    def max_zero_residual(self):
        return max((r["residual"] for r in self.zero_residuals), default=0.0)

    @property
    def passed(self):
        ptol = self.param_tol if self.param_tol is not None else self.tol
        dtol = self.density_tol if self.density_tol is not None else self.tol
        return (self.max_level_residual <= self.tol
                and self.max_parameter_residual <= ptol
                and self.max_zero_residual <= ptol
                and self.division_residual <= TOL_DIV
                and self.density_residual <= dtol
                and self.phase_residual <= dtol)

    def to_json(self):
        return {"base": list(self.base), "target": list(self.target), "tol": self.tol,
                "level_residuals": self.level_residuals,
                "parameter_residuals": self.parameter_residuals,
                "zero_residuals": self.zero_residuals,
                "division_residual": self.division_residual,
                "density_residual": self.density_residual,
                "phase_residual": self.phase_residual,
                "pass": self.passed}

    def summary(self):
        return "\n".join([
            f"base {self.base} -> target {self.target}",
            f"  level residual      {self.max_level_residual:.3e}  ({len(self.level_residuals)} levels)",
            f"  parameter residual  {self.max_parameter_residual:.3e}",
            f"  forced zeros        {self.max_zero_residual:.3e}",
            f"  w-division residual {self.division_residual:.3e}",
            f"  density residual    {self.density_residual:.3e}",
            f"  phase residual      {self.phase_residual:.3e}",
            "round trip: " + ("PASS" if self.passed else "FAIL"),
        ])


def forced_zero_indices(base, N, M):
    """Strip parameters that vanish for any Bernstein-Szego measure of degree ``base``."""
    n, m = base
    idx = []
    for i in range(n + 1, N + 1):
        idx += [(i, m), (-i, m)]
        if m >= 1:
            idx.append((i, m - 1))
    for j in range(m + 1, M + 1):
        idx += [(n, j), (n, -j)]
        if n >= 1:
            idx.append((n - 1, j))
    return [k for k in idx if k != (0, 0)]


def density_identity_residual(level_poly, p, grid=128):
    """``max | |phi|^2 / |p|^2 - 1 |`` over a ``grid x grid`` torus mesh."""
    theta = 2 * np.pi * np.arange(grid) / grid
    Z = np.exp(1j * theta)[:, None]
    W = np.exp(1j * theta)[None, :]
    phi = poly.evaluate_grid(level_poly, Z, W)
    return float(np.abs(np.abs(phi) ** 2 / np.abs(p(Z, W)) ** 2 - 1.0).max())


def phase_residual(level_poly, p):
    """``min over |lambda| = 1 of max|lambda phi - p|`` coefficient-wise."""
    a = poly.pad_to(level_poly, *np.subtract(p.coeffs.shape, 1))[0]
    b = p.coeffs
    inner = np.vdot(a, b)
    lam = inner / abs(inner) if abs(inner) else 1.0
    return float(np.abs(lam * a - b).max())


def roundtrip_verify(p, base, target, tol=TOL_EXTEND, grid_size=256, param_tol=1e-7, density_tol=1e-7):
    """Extend from the base data in both directions and compare with direct computation."""
    n, m = base
    N, M = target
    N, M = max(N, n), max(M, m)
    p = p.normalized(grid_size)
    table = compute_moments(p, N, M, grid_size=grid_size)
    sys = OrthoSystem(table, N, M)
    cs = CoeffSet.build(sys)
    u = extract_parameters(sys, cs, check=False)
    report = RoundTripReport((n, m), (N, M), tol, param_tol=param_tol, density_tol=density_tol)
    div = 0.0
    for direction, reach in (("n", N), ("m", M)):
        state = extend_strip(base_for(sys, cs, base, direction), reach, direction)
        div = max([div] + [r for _, r in state.division_residuals])
        for (i, j) in state.levels():
            for ordering, mine, ref in (("lex", state.system.phi(i, j), sys.phi(i, j)),
                                        ("revlex", state.system.phit(i, j), sys.phit(i, j))):
                report.level_residuals.append({"level": [i, j], "ordering": ordering, "direction": direction,
                                               "residual": poly.max_diff(mine, ref)})
        recon = reconstruct_outer_parameters(state)
        for (i, j), v in recon.items():
            report.parameter_residuals.append({"index": [i, j], "direct": [u[i, j].real, u[i, j].imag],
                                               "extended": [v.real, v.imag], "residual": abs(v - u[i, j])})
        for k in forced_zero_indices(base, N, M):
            if k in recon:
                report.zero_residuals.append({"index": list(k), "residual": abs(recon[k])})
    report.division_residual = div
    lead = sys.phi(n, m)[:1]
    report.density_residual = density_identity_residual(lead[0], p)
    report.phase_residual = phase_residual(lead, p)
    return report
