"""Property tests over random Bernstein-Szego densities."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from bicircle import densities, poly
from bicircle.coeffs import CoeffSet, verify_all, verify_zero_propagation
from bicircle.extension import base_for, extend_strip
from bicircle.moments import check_stability, compute_moments
from bicircle.ortho import OrthoSystem
from bicircle.params import crosscheck_parameters, detect_bernstein_szego, extract_parameters

degrees = st.tuples(st.integers(0, 2), st.integers(0, 2))
seeds = st.integers(0, 2**32 - 1)
budgets = st.floats(0.05, 0.9)

SETTINGS = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def system(p, N, M):
    sys = OrthoSystem(compute_moments(p, N, M), N, M)
    return sys, CoeffSet.build(sys)


@SETTINGS
@given(degrees, seeds, budgets)
def test_random_density_is_stable(deg, seed, budget):
    p = densities.random_stable(*deg, seed, budget=budget)
    assert check_stability(p).passed


@SETTINGS
@given(degrees, seeds)
def test_identities_hold(deg, seed):
    p = densities.random_stable(*deg, seed)
    sys, cs = system(p, 3, 3)
    rep = verify_all(sys, cs, tol=1e-8)
    assert rep.passed, rep.summary()
    assert verify_zero_propagation(cs).passed
    u = extract_parameters(sys, cs)
    assert crosscheck_parameters(sys, u, tol=1e-8).passed


@SETTINGS
@given(degrees, seeds)
def test_detection_at_true_degree(deg, seed):
    p = densities.random_stable(*deg, seed)
    n, m = deg
    sys, cs = system(p, n + 2, m + 2)
    rep = detect_bernstein_szego(cs, extract_parameters(sys, cs), deg)
    assert rep.passed, rep.summary()


@SETTINGS
@given(st.tuples(st.integers(0, 2), st.integers(1, 2)), seeds, st.sampled_from(["n", "m"]))
def test_extension_agrees(deg, seed, direction):
    p = densities.random_stable(*deg, seed)
    n, m = deg
    N, M = (n + 2, m) if direction == "n" else (n, m + 2)
    sys, cs = system(p, N, M)
    st_ = extend_strip(base_for(sys, cs, deg, direction), N if direction == "n" else M, direction)
    for (i, j) in st_.levels():
        assert poly.max_diff(st_.system.phi(i, j), sys.phi(i, j)) <= 1e-8
        assert poly.max_diff(st_.system.phit(i, j), sys.phit(i, j)) <= 1e-8


@SETTINGS
@given(seeds)
def test_conjugate_symmetry_of_parameters(seed):
    sys, cs = system(densities.random_stable(1, 1, seed), 2, 2)
    u = extract_parameters(sys, cs)
    for (i, j), v in u.items():
        assert u[-i, -j] == np.conj(v)
