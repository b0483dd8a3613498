"""Bernstein-Szego detection on a mixture of two such densities, at every small base degree."""
from bicircle import densities
from bicircle.coeffs import CoeffSet
from bicircle.moments import compute_moments
from bicircle.ortho import OrthoSystem
from bicircle.params import detect_bernstein_szego, extract_parameters


def main(pad=2):
    p, q = densities.mixture_pair()
    f = densities.mixture(p, q)
    for base in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]:
        N, M = base[0] + pad, base[1] + pad
        sys = OrthoSystem(compute_moments(f, N, M), N, M)
        cs = CoeffSet.build(sys)
        print(detect_bernstein_szego(cs, extract_parameters(sys, cs, check=False), base).summary())
        print()


if __name__ == "__main__":
    main()
