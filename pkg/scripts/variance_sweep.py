"""Monte Carlo variance of d_H against m for the signed and dense constructions.

Writes a CSV table (one row per grid point and pair) and prints the fitted
log-log slopes.
"""

import argparse
import csv
import sys

import numpy as np

from binembed import stats
from binembed.randomness import SeedSpec
from binembed.suites import random_unit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1 << 14)
    ap.add_argument("--ms", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", "-o", default="-")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pairs = list(zip(random_unit(rng, args.n, args.pairs), random_unit(rng, args.n, args.pairs)))
    grid = [(args.n, m) for m in args.ms]
    curves = {}
    for kind, mode in (("SignedCirculant", "uniform"), ("SignedCirculant", "first_m"),
                       ("DenseGaussian", "uniform")):
        curves[(kind, mode)] = stats.variance_curve(kind, grid, lambda n: pairs, args.trials,
                                                    SeedSpec(args.seed), I_mode=mode)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.DictWriter(out, fieldnames=("I_mode",) + stats.TABLE_COLUMNS, extrasaction="ignore",
                       lineterminator="\n")
    w.writeheader()
    for (kind, mode), curve in curves.items():
        for r in curve.rows:
            w.writerow({"I_mode": mode, **r})
    if out is not sys.stdout:
        out.close()
    for (kind, mode), curve in curves.items():
        print(f"{kind:16s} {mode:8s} slope {curve.slope:+.3f} over m={list(curve.slope_ms)}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
