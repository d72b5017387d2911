"""Wall-time comparison of the shared-plan path against two independent solves.

The shared path runs the linearization loop once; the unshared path solves the
node and structure problems separately. Prints a CSV of medians per size.
"""

import argparse
import time

import numpy as np

from graphot.core import EmbeddingSet, SolverConfig
from graphot.fused import ProjectionPair, solve_got


def median_time(x, y, shared, repeats, config):
    cfg = SolverConfig(
        beta=config.beta, convergence_tol=config.convergence_tol, shared_plan=shared
    )
    solve_got(x, y, ProjectionPair(), cfg)  # warmup
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        solve_got(x, y, ProjectionPair(), cfg)
        samples.append(time.perf_counter() - t0)
    return float(np.median(samples))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")],
                    default=[25, 50, 100])
    ap.add_argument("--d", type=int, default=32)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--convergence-tol", type=float, default=1e-8)
    args = ap.parse_args()

    config = SolverConfig(convergence_tol=args.convergence_tol)
    rng = np.random.default_rng(args.seed)
    print("n,shared_median_s,unshared_median_s,speedup")
    for n in args.sizes:
        x = EmbeddingSet(rng.standard_normal((n, args.d)))
        y = EmbeddingSet(rng.standard_normal((n, args.d)))
        shared_t = median_time(x, y, True, args.repeats, config)
        unshared_t = median_time(x, y, False, args.repeats, config)
        print(f"{n},{shared_t:.4f},{unshared_t:.4f},{unshared_t / shared_t:.2f}")


if __name__ == "__main__":
    main()
