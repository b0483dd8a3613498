import numpy as np
import pytest

from bicircle import densities
from bicircle.coeffs import CoeffSet, one_dim_verblunsky
from bicircle.errors import ConstraintViolation, MissingLevel
from bicircle.moments import compute_moments
from bicircle.ortho import OrthoSystem
from bicircle.params import (ParameterField, check_constraints, crosscheck_parameters,
                             detect_bernstein_szego, extract_parameters)

from conftest import BS_BASES, CATALOGUE, build


def params_of(p, N, M):
    t = compute_moments(p, N, M)
    sys = OrthoSystem(t, N, M)
    cs = CoeffSet.build(sys)
    return sys, cs, extract_parameters(sys, cs)


def test_field_symmetry():
    u = ParameterField({(2, -1): 0.3 + 0.1j, (0, 2): 0.2j})
    assert u[-2, 1] == np.conj(u[2, -1])
    assert u[0, -2] == -0.2j
    u[-1, -1] = 0.5j
    assert u[1, 1] == -0.5j
    assert (-1, -1) in u and (3, 3) not in u
    with pytest.raises(MissingLevel):
        u[3, 3]


def test_lebesgue_parameters():
    *_, u = params_of(densities.lebesgue(), 3, 3)
    for (i, j), v in u.items():
        assert abs(v - (1.0 if (i, j) == (0, 0) else 0.0)) < 1e-14


def test_diagonal_parameters():
    *_, u = params_of(densities.diagonal(), 3, 3)
    assert abs(u[-1, -1] - 0.5) < 1e-9 and abs(u[1, 1] - 0.5) < 1e-9
    assert abs(u[-1, 1]) < 1e-12 and abs(u[1, 0]) < 1e-12 and abs(u[0, 1]) < 1e-12
    assert abs(u[0, 0] - 1) < 1e-15


def test_one_dim_factor_parameters():
    *_, u = params_of(densities.separable(), 3, 3)
    assert abs(u[1, 0] - 0.5) < 1e-10
    for (i, j), v in u.items():
        if (i, j) not in ((0, 0), (1, 0)):
            assert abs(v) < 1e-10, (i, j)


def test_product_density_parameters():
    a, b = 0.5, -0.3 + 0.4j
    sys, cs, u = params_of(densities.separable(a, b), 3, 3)
    az, _ = one_dim_verblunsky([a**k for k in range(4)])
    wrow = [sys.table(0, j) for j in range(4)]
    aw, _ = one_dim_verblunsky(wrow)
    for i in range(1, 4):
        assert abs(u[i, 0] - az[i - 1]) < 1e-10
        assert abs(u[0, i] - aw[i - 1]) < 1e-10
        for j in range(1, 4):
            assert abs(u[i, j]) < 1e-10 and abs(u[i, -j]) < 1e-10


def test_constraint_violation():
    _, _, sys, cs = build("diagonal")
    u = extract_parameters(sys, cs)
    u[2, 1] = 1.2
    with pytest.raises(ConstraintViolation):
        check_constraints(sys, u, 4, 4)
    u = extract_parameters(sys, cs)
    u[0, 0] = -1
    with pytest.raises(ConstraintViolation):
        check_constraints(sys, u, 4, 4)


@pytest.mark.parametrize("name", CATALOGUE)
def test_crosscheck_routes_agree(name):
    _, _, sys, cs = build(name)
    u = extract_parameters(sys, cs)
    r = crosscheck_parameters(sys, u, tol=1e-8)
    assert r.passed, r.summary()


def test_crosscheck_diagonal_and_unshifted_pairing():
    _, _, sys, cs = build("diagonal")
    r = crosscheck_parameters(sys, extract_parameters(sys, cs), tol=1e-9)
    assert r.passed
    (adv,) = [e for e in r.entries if e.relation == "u[-n,-m]:unshifted-inner" and e.level == (1, 1)]
    # the pairing without w gives 0 where u[-1,-1] = 1/2
    assert adv.advisory and not adv.passed and abs(adv.residual - 0.5) < 1e-12


@pytest.mark.parametrize("name", CATALOGUE)
def test_detect_bs_at_base(name):
    n, m = BS_BASES[name]
    _, _, sys, cs = build(name, n + 2, m + 2)
    rep = detect_bernstein_szego(cs, extract_parameters(sys, cs), (n, m))
    assert rep.passed, rep.summary()
    assert max(rep.conditions.values()) <= 1e-8


def test_detect_separable_below_degree_fails():
    _, _, sys, cs = build("diagonal", 3, 3)
    rep = detect_bernstein_szego(cs, extract_parameters(sys, cs), (0, 0))
    assert not rep.passed


@pytest.mark.parametrize("base", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_detect_mixture_fails(base):
    p, q = densities.mixture_pair()
    n, m = base
    t = compute_moments(densities.mixture(p, q), n + 2, m + 2)
    sys = OrthoSystem(t, n + 2, m + 2)
    cs = CoeffSet.build(sys)
    rep = detect_bernstein_szego(cs, extract_parameters(sys, cs, check=False), base)
    assert not rep.passed
    assert max(rep.conditions.values()) > 1e-3


def test_bs_report_json():
    _, _, sys, cs = build("lebesgue", 2, 2)
    js = detect_bernstein_szego(cs, extract_parameters(sys, cs), (0, 0)).to_json()
    assert js["pass"] and js["base"] == [0, 0] and set(js["conditions"]) == {
        "(a) K,tE", "(a) u", "(b) K,E", "(b) u", "(c) u"}
