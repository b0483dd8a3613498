"""Rebuild the levels outside the base rectangle of a Bernstein-Szego measure and compare.

    python scripts/roundtrip_demo.py --seed 3 --degree 2 1 --reach 3
"""
import argparse

import numpy as np

from bicircle import densities
from bicircle.extension import roundtrip_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, nargs=2, default=(2, 1), metavar=("N", "M"))
    ap.add_argument("--reach", type=int, default=2, help="levels past the base in each direction")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--diagonal", action="store_true", help="use (2zw - 1)/sqrt(3) instead of a random density")
    args = ap.parse_args()

    if args.diagonal:
        p, base = densities.diagonal(), (1, 1)
    else:
        p, base = densities.random_stable(*args.degree, np.random.default_rng(args.seed)), tuple(args.degree)
    target = (base[0] + args.reach, base[1] + args.reach)
    rep = roundtrip_verify(p, base, target)
    print(rep.summary())
    worst = sorted(rep.level_residuals, key=lambda r: -r["residual"])[:5]
    print("largest level residuals:")
    for r in worst:
        print(f"  {r['direction']} {tuple(r['level'])} {r['ordering']:6s} {r['residual']:.2e}")


if __name__ == "__main__":
    main()
