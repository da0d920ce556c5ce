"""Pass rate of the four fast constructions as a function of the size multiplier.

All four multipliers (bits, dimension, sparsity, blocks) are scaled together.
The acceptance suite picks the smallest ladder value reaching 95% on its own
calibration seeds; this script shows the whole curve.
"""

import argparse

from binembed import suites
from binembed.randomness import SeedSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ladder", type=float, nargs="+", default=[0.5, 1.0, 1.5, 2.0, 3.0])
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--N", type=int, default=24)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--delta", type=float, default=0.25)
    ap.add_argument("--eta", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    seed = SeedSpec(args.seed)
    D = suites.clustered_pointset(seed.child(1).generator(), args.N, args.n)
    for c in suites.CONSTRUCTIONS:
        for mult in args.ladder:
            params = suites.construction_params(c, mult, args.n, args.N, args.delta, args.eta)
            seeds = [seed.child(9, k) for k in range(args.runs)]
            passes, worst = suites.pass_count(params, D, args.delta, seeds)
            print(f"{c.label:18s} x{mult:<4} {params.describe():60s} "
                  f"pass {passes:3d}/{args.runs}  worst dev {worst:.3f}")


if __name__ == "__main__":
    main()
