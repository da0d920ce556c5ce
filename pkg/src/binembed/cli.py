"""Command-line front end.

Exit codes: 0 success / all assertions pass, 1 assertion failure,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import bench as benchmod
from . import codes, datasets, jl, stats, suites
from . import config as cfgmod
from .codes import BitCode, sign_map
from .randomness import SeedSpec, parse_seed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _seed_arg(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _add_config_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("experiment config (flags override --config)")
    g.add_argument("--config", help="key=value or JSON file of config defaults")
    g.add_argument("--seed", type=_seed_arg, help="master seed, decimal or 0x hex")
    g.add_argument("--kind", choices=sorted(set(cfgmod.KIND_ALIASES) | set(cfgmod.KIND_ALIASES.values())))
    g.add_argument("--m", type=int)
    g.add_argument("--nprime", type=int)
    g.add_argument("--B", type=int)
    g.add_argument("--mprime", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--delta", type=float)
    g.add_argument("--eta", type=float)
    g.add_argument("--N", type=int, help="point count entering log(N/eta); defaults to the data size")
    g.add_argument("--trials", type=int)
    g.add_argument("--I-mode", dest="I_mode", choices=["first_m", "uniform", "dyadic"])
    g.add_argument("--variant", choices=["FJLT", "SJLT"])
    g.add_argument("--toeplitz", action="store_const", const=True)
    for c in ("c_bits", "c_dim", "c_sparse", "c_blocks"):
        g.add_argument("--" + c.replace("_", "-"), dest=c, type=float)


def load_config(args) -> cfgmod.ExperimentConfig:
    cfg = cfgmod.ExperimentConfig()
    if getattr(args, "config", None):
        try:
            cfg = cfg.merged(cfgmod.read_config_file(args.config))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"config: {exc}") from None
    flags = {k: v for k, v in vars(args).items()
             if k in cfgmod._TYPES and v is not None and k not in ("format",)}
    return cfg.merged(flags)


def _write_csv(rows, columns, out):
    fh = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r.get(k, "")) for k in columns})
    finally:
        if out:
            fh.close()


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


# --------------------------------------------------------------------------


def cmd_embed(args) -> int:
    cfg = load_config(args)
    try:
        ps = datasets.load_pointset(args.input, normalize=args.normalize)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    N = cfg.N or max(ps.N, 1)
    params = cfgmod.resolve(cfg, ps.n, N)
    print(f"resolved: {params.describe()} seed={cfg.seed:#x}", file=sys.stderr)
    t0 = time.perf_counter()
    e = cfgmod.build_embedder(params, SeedSpec(cfg.seed), cfg.I_mode, cfg.toeplitz)
    t1 = time.perf_counter()
    X = ps.points
    if e.preconditioner is not None:
        X = jl.apply(e.preconditioner, X)
    t2 = time.perf_counter()
    if e.gaussian is not None:
        V = jl.apply(e.gaussian, X)
    else:
        V = np.concatenate([b.apply(X) for b in e.blocks], axis=-1)
    S = sign_map(V)
    t3 = time.perf_counter()
    out = [BitCode(s, e.num_blocks) for s in S]
    try:
        if args.format == "binary":
            codes.write_binary(args.output, out)
        else:
            codes.write_text(args.output, out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from None
    print(f"timing: build={t1 - t0:.6f}s preconditioner={t2 - t1:.6f}s "
          f"sign_stage={t3 - t2:.6f}s points={ps.N}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else 0
    rows = suites.run_suite(args.suite, seed, args.scale)
    _write_csv(rows, suites.VERIFY_COLUMNS, args.output)
    failed = sum(not r["pass"] for r in rows)
    print(f"{args.suite}: {len(rows) - failed}/{len(rows)} assertions passed", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else 0
    with benchmod.single_threaded():
        rows = benchmod.circulant_stage(seed, args.ns + [4 * args.ns[-1]], reps=args.reps)
        rows += benchmod.embedding_times(seed, args.ns, reps=args.reps)
        rows += benchmod.dense_growth(seed, args.ns, reps=args.reps)
    _write_csv(rows, benchmod.BENCH_COLUMNS, args.output)
    return EXIT_OK


def cmd_variance(args) -> int:
    cfg = load_config(args)
    kind = cfgmod.KIND_ALIASES.get(cfg.kind, cfg.kind)
    rng = SeedSpec(cfg.seed).child(1).generator()

    def pairs(n):
        return [tuple(suites.random_unit(rng, n, 2)) for _ in range(args.pairs)]

    grid = [(n, m) for n in args.ns for m in args.ms]
    curve = stats.variance_curve(kind, grid, pairs, cfg.trials, SeedSpec(cfg.seed), I_mode=cfg.I_mode)
    _write_csv(curve.rows, stats.TABLE_COLUMNS, args.output)
    print(f"slope={curve.slope:.4f} over m={list(curve.slope_ms)}", file=sys.stderr)
    return EXIT_OK


def cmd_covariance(args) -> int:
    cfg = load_config(args)
    if args.vectors:
        try:
            V = datasets.load_pointset(args.vectors, normalize=True).points
        except OSError as exc:
            raise UsageError(f"cannot read {args.vectors}: {exc}") from None
        if V.shape[0] != 4:
            raise UsageError("covariance needs exactly 4 vectors (x1, x2, y1, y2)")
        V = tuple(V)
    else:
        V = suites.remark_family(args.a)
    c = stats.estimate_indicator_covariance(*V, cfg.trials, SeedSpec(cfg.seed))
    ok = abs(c.value) <= c.bound_rhs + 3 * c.std_error
    row = {"kind": "indicator_cov", "n": len(V[0]), "trials": c.trials, "seed": cfg.seed,
           "mean": c.value, "se_mean": c.std_error, "bound_rhs": c.bound_rhs, "pass": ok}
    _write_csv([row], stats.TABLE_COLUMNS, args.output)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="binembed", description="binary embeddings of the sphere")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a point set into sign codes")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--format", choices=["text", "binary"], default="text")
    p.add_argument("--no-normalize", dest="normalize", action="store_false")
    _add_config_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="run a verification suite; CSV row per assertion")
    p.add_argument("--suite", required=True, choices=sorted(suites.SUITES))
    p.add_argument("--seed", type=_seed_arg)
    p.add_argument("--scale", type=float, default=1.0, help="trial-count multiplier")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="per-point embedding timings")
    p.add_argument("--ns", type=_int_list, default=[1 << 12, 1 << 14, 1 << 16])
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=_seed_arg)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("variance", help="MC variance of d_H over an (n, m) grid")
    p.add_argument("--ns", type=_int_list, required=True)
    p.add_argument("--ms", type=_int_list, required=True)
    p.add_argument("--pairs", type=int, default=5)
    p.add_argument("--output", "-o")
    _add_config_flags(p)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("covariance", help="indicator covariance against its bound")
    p.add_argument("--vectors", help="file with the four vectors x1, x2, y1, y2")
    p.add_argument("--a", type=float, default=0.1, help="parameter of the built-in near-parallel family")
    p.add_argument("--output", "-o")
    _add_config_flags(p)
    p.set_defaults(func=cmd_covariance)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, datasets.DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
