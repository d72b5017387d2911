"""Sweep the node/structure mix on a synthetic pair and report plan quality.

Example:
    python scripts/lambda_sweep.py --n 8 --d 16 --noise 0.05 --seed 7 --out sweep.csv
"""

import argparse
import sys

from graphot.core import SolverConfig
from graphot.harness import DEFAULT_SWEEP_LAMBDAS, generate_pair, run_sweep, sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--d", type=int, default=16)
    ap.add_argument("--noise", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lambdas", type=lambda s: [float(v) for v in s.split(",")],
                    default=list(DEFAULT_SWEEP_LAMBDAS))
    ap.add_argument("--beta", type=float, default=0.5)
    ap.add_argument("--tau", type=float, default=0.1)
    ap.add_argument("--out", default=None, help="write CSV here instead of stdout")
    args = ap.parse_args()

    config = SolverConfig(beta=args.beta, tau=args.tau)
    pair = generate_pair(args.n, args.d, args.noise, args.seed)
    table = sweep_csv(run_sweep(args.lambdas, config, pair))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(table)


if __name__ == "__main__":
    main()
