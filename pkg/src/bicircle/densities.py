"""Reference densities used by the tests, the scripts and the CLI examples."""
import numpy as np

from .moments import StablePolynomial


def lebesgue():
    """``p = 1``: normalized Lebesgue measure on the torus."""
    return StablePolynomial(np.ones((1, 1)))


def one_dim(a=0.5):
    """``p1(z) = (z - a) / sqrt(1 - |a|^2)``; its row moments are ``c[k, 0] = a^|k|`` for real a."""
    return StablePolynomial(np.array([[-a], [1.0]]) / np.sqrt(1 - abs(a) ** 2))


def separable(a=0.5, b=None):
    """``p1(z) p2(w)``; with ``b=None`` only the z-factor is present (degree (1, 0))."""
    pz = one_dim(a).coeffs
    if b is None:
        return StablePolynomial(pz)
    pw = one_dim(b).coeffs.T
    return StablePolynomial(pz @ pw)


def diagonal():
    """``p = (2 z w - 1) / sqrt(3)``, moments ``c[k, j] = 2^-|k|`` on ``k = j`` and zero elsewhere."""
    return StablePolynomial(np.array([[-1.0, 0.0], [0.0, 2.0]]) / np.sqrt(3))


def random_stable(n, m, rng=None, budget=0.8):
    """Random ``p`` of degree (n, m) whose reverse is ``1 + sum eps[i, j] z^i w^j``.

    The complex perturbation satisfies ``sum |eps| = budget < 1`` so the
    reverse is bounded away from zero on the closed bidisk.  ``eps[n, m]``
    is kept away from zero so the degree is exact.
    """
    rng = np.random.default_rng(rng)
    eps = rng.normal(size=(n + 1, m + 1)) + 1j * rng.normal(size=(n + 1, m + 1))
    eps[0, 0] = 0
    if n or m:
        eps[n, m] = (0.5 + abs(eps[n, m])) * np.exp(1j * np.angle(eps[n, m]))
        eps *= budget / np.abs(eps).sum()
    eps[0, 0] = 1.0
    return StablePolynomial.from_reverse(eps)


def mixture(p, q):
    """Density ``(1/|p|^2 + 1/|q|^2) / 2`` as a callable ``f(theta, phi)``; not Bernstein-Szego in general."""
    def f(theta, phi):
        z, w = np.exp(1j * theta), np.exp(1j * phi)
        return 0.5 * (1 / np.abs(p(z, w)) ** 2 + 1 / np.abs(q(z, w)) ** 2)
    return f


def mixture_pair():
    """Two stable degree-(1, 1) polynomials whose mixture fails every base up to (1, 1)."""
    p = StablePolynomial(np.array([[0.3, -0.2], [0.4j, 1.0]]))
    q = StablePolynomial(np.array([[-0.4, 0.3j], [0.2, 1.0]]))
    return p, q


def catalogue(seed=2024, count=5):
    """Named BS test densities with their base degree: the fixed set plus ``count`` random ones."""
    rng = np.random.default_rng(seed)
    out = [("lebesgue", lebesgue()), ("separable", separable()), ("diagonal", diagonal())]
    shapes = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3), (3, 2), (2, 3)]
    for k in range(count):
        n, m = shapes[k % len(shapes)]
        out.append((f"random{k}-{n}x{m}", random_stable(n, m, rng)))
    return out
