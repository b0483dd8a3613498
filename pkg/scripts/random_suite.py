"""Run the full identity suite, parameter cross-checks and detection on many random densities.

Prints one line per density and a summary of the worst residual per family.
"""
import argparse
import time

import numpy as np

from bicircle import densities
from bicircle.coeffs import CoeffSet, verify_all, verify_zero_propagation
from bicircle.moments import compute_moments
from bicircle.ortho import OrthoSystem
from bicircle.params import crosscheck_parameters, detect_bernstein_szego, extract_parameters


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--pad", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--budget", type=float, default=0.8, help="sum of |eps| in the reverse polynomial")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = {"identities": 0.0, "params": 0.0, "detect": 0.0, "zeros": 0.0}
    failures = 0
    t0 = time.perf_counter()
    for k in range(args.count):
        n, m = rng.integers(0, args.max_degree + 1, size=2)
        p = densities.random_stable(int(n), int(m), rng, budget=args.budget)
        N, M = n + args.pad, m + args.pad
        sys = OrthoSystem(compute_moments(p, N, M), N, M)
        cs = CoeffSet.build(sys)
        u = extract_parameters(sys, cs)
        reps = {"identities": verify_all(sys, cs), "params": crosscheck_parameters(sys, u),
                "zeros": verify_zero_propagation(cs)}
        bs = detect_bernstein_szego(cs, u, (n, m))
        for key, r in reps.items():
            worst[key] = max(worst[key], r.max_residual())
        worst["detect"] = max(worst["detect"], *bs.conditions.values())
        ok = all(r.passed for r in reps.values()) and bs.passed
        failures += not ok
        print(f"{k:3d} degree ({n},{m})  {'ok' if ok else 'FAIL'}  "
              f"identities {reps['identities'].max_residual():.1e}  detect {max(bs.conditions.values()):.1e}")
    print(f"\n{args.count - failures}/{args.count} passed in {time.perf_counter() - t0:.1f} s")
    for key, v in worst.items():
        print(f"  worst {key:10s} {v:.2e}")


if __name__ == "__main__":
    main()
