"""Wall-clock benchmarks of per-point embedding time.

Timings are the median of ``reps`` runs after ``warmup`` discarded runs, with
BLAS/OpenMP pools pinned to one thread. Only growth ratios are meaningful.
"""

from __future__ import annotations

import math
import statistics
import time
from contextlib import contextmanager

import numpy as np

from . import config as cfgmod
from . import embeddings as emb
from . import jl
from .codes import sign_map
from .randomness import as_seed

BENCH_COLUMNS = ("label", "n", "m", "nprime", "B", "s", "input", "seconds", "ratio_4n")


@contextmanager
def single_threaded():
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        yield
        return
    with threadpool_limits(limits=1):
        yield


def time_call(fn, reps: int = 5, warmup: int = 1) -> float:
    if reps < 5:
        raise ValueError("need at least 5 repetitions")
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def sparse_input(rng, n: int, nnz: int) -> np.ndarray:
    x = np.zeros(n)
    x[rng.choice(n, size=nnz, replace=False)] = rng.standard_normal(nnz)
    return x


def _row(label, params, seconds, inp="dense", ratio=""):
    return {"label": label, "n": params.n, "m": params.m, "nprime": params.nprime or "",
            "B": params.B or "", "s": params.s or "", "input": inp, "seconds": seconds,
            "ratio_4n": ratio}


def _fill_ratios(rows):
    by = {}
    for r in rows:
        by.setdefault((r["label"], r["input"]), {})[r["n"]] = r
    for series in by.values():
        for n, r in series.items():
            if 4 * n in series:
                r["ratio_4n"] = series[4 * n]["seconds"] / r["seconds"]
    return rows


def circulant_stage(seed, ns, m: int = 64, reps: int = 5, backend: str = "builtin") -> list[dict]:
    """Sign stage sgn(R_I C_g D_eps x) alone, per point."""
    seed = as_seed(seed)
    rng = seed.child(9).generator()
    rows = []
    for n in ns:
        e = emb.build_signed_circulant_embedder(seed, n, "uniform", m)
        x = rng.standard_normal(n)
        t = time_call(lambda: sign_map(e.project(x, backend)), reps)
        rows.append(_row("SignedCirculant", cfgmod.ResolvedParams("SignedCirculant", n, m), t))
    return _fill_ratios(rows)


def embedding_times(seed, ns, delta: float = 0.25, N: int = 24, eta: float = 0.1,
                    reps: int = 5, sparse: bool = True) -> list[dict]:
    """Per-point time of each construction at formula-resolved sizes (multipliers 1)."""
    seed = as_seed(seed)
    rng = seed.child(9).generator()
    rows = []
    specs = [("DenseGaussian", "FJLT"), ("AcceleratedGaussian", "FJLT"),
             ("AcceleratedGaussian", "SJLT"), ("SignedCirculant", "FJLT"),
             ("MedianFast", "FJLT"), ("MedianFast", "SJLT")]
    for n in ns:
        x = rng.standard_normal(n)
        xs = sparse_input(rng, n, math.isqrt(n))
        for kind, variant in specs:
            cfg = cfgmod.ExperimentConfig(kind=kind, variant=variant, delta=delta, eta=eta)
            params = cfgmod.resolve(cfg, n, N)
            e = cfgmod.build_embedder(params, seed)
            label = kind if kind in ("DenseGaussian", "SignedCirculant") else f"{kind}[{variant}]"
            rows.append(_row(label, params, time_call(lambda: sign_map(e.project(x)), reps)))
            if sparse and variant == "SJLT":
                rows.append(_row(label, params, time_call(lambda: sign_map(e.project(xs)), reps),
                                 inp="sparse"))
    return _fill_ratios(rows)


def sjlt_sparse_speedup(seed, n: int = 1 << 16, reps: int = 5, **kw) -> tuple[float, float, float]:
    """(dense-input time, sqrt(n)-sparse-input time, ratio) for the SJLT accelerated embedding."""
    seed = as_seed(seed)
    cfg = cfgmod.ExperimentConfig(kind="AcceleratedGaussian", variant="SJLT", **kw)
    params = cfgmod.resolve(cfg, n, 24)
    e = cfgmod.build_embedder(params, seed)
    rng = seed.child(9).generator()
    x = rng.standard_normal(n)
    xs = sparse_input(rng, n, math.isqrt(n))
    td = time_call(lambda: sign_map(e.project(x)), reps)
    ts = time_call(lambda: sign_map(e.project(xs)), reps)
    return td, ts, td / ts


def dense_growth(seed, ns, m: int = 88, reps: int = 5) -> list[dict]:
    """Per-point sign stage of the dense Gaussian kind (O(mn))."""
    seed = as_seed(seed)
    rng = seed.child(9).generator()
    rows = []
    for n in ns:
        G = jl.build_dense_gaussian(seed, n, m)
        x = rng.standard_normal(n)
        t = time_call(lambda: sign_map(jl.apply(G, x)), reps)
        rows.append(_row("DenseGaussian", cfgmod.ResolvedParams("DenseGaussian", n, m), t))
    return _fill_ratios(rows)
