"""The eleven acceptance criteria at their stated sizes and tolerances.

Each test prints one PASS/FAIL line; a summary is printed when the module ends.
"""

import math
import time

import numpy as np
import pytest

from binembed import bench, jl, suites, transforms as tr
from binembed import embeddings as emb
from binembed.codes import sign_map
from binembed.randomness import SeedSpec

SEED = 20240601
RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def summary():
    yield
    print("\n=== acceptance summary ===")
    for k in sorted(RESULTS):
        ok, msg = RESULTS[k]
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")


def report(k: int, ok: bool, msg: str, t0: float, limit: float):
    elapsed = time.perf_counter() - t0
    ok = bool(ok) and elapsed < limit
    msg = f"{msg} [{elapsed:.1f}s, limit {limit:.0f}s]"
    RESULTS[k] = (ok, msg)
    print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'}: {msg}")
    return ok


def failures(rows):
    return [f"{r['check']} ({r['kind']}, m={r['m']}): {r['mean']} vs {r['bound_rhs']}"
            for r in rows if not r["pass"]]


def test_c01_alternating_pair_variance():
    t0 = time.perf_counter()
    rows = suites.suite_withoutrad(SEED, part2=False)
    var_rows = [r for r in rows if r["check"] == "var=1/4"]
    worst = max(abs(r["var"] - 0.25) for r in var_rows)
    bad = failures(rows)
    assert report(1, not bad, f"{len(rows)} rows, max |Var-1/4| = {worst:.4f}", t0, 60), bad


def test_c02_unbiasedness():
    t0 = time.perf_counter()
    rows = suites.suite_unbiased(SEED)
    z = max(abs(r["mean"] - r["bound_rhs"]) / r["se_mean"] for r in rows)
    bad = failures(rows)
    assert report(2, not bad, f"60 pair/kind cells, max |z| = {z:.2f}", t0, 300), bad


def test_c03_flip_probability():
    t0 = time.perf_counter()
    rows = suites.suite_ab(SEED)
    ratio = next(r["mean"] for r in rows if r["check"].startswith("quadrature f(0.05"))
    bad = failures(rows)
    assert report(3, not bad, f"{len(rows)} rows, quadrature ratio at a=0.05: {ratio:.5f}", t0, 300), bad


def test_c04_indicator_covariance():
    t0 = time.perf_counter()
    rows = suites.suite_cov(SEED)
    remark = next(r for r in rows if r["check"].startswith("remark"))
    bad = failures(rows)
    msg = (f"{len(rows) - 2} tuples within bound; remark family {remark['mean']:.6f} "
           f"vs {remark['bound_rhs']:.6f}")
    assert report(4, not bad, msg, t0, 600), bad


def test_c05_uniform_index_variance_shape():
    t0 = time.perf_counter()
    rows = suites.suite_varbound(SEED)
    slope = next(r["mean"] for r in rows if "slope" in r["check"])
    crit = [r for r in rows if "uniform" in r["check"]]
    bad = failures(crit)
    extra = failures([r for r in rows if r not in crit])
    ok = report(5, not bad, f"slope {slope:.3f}, fitted-constant bound on {len(crit) - 1} cells", t0, 900)
    assert ok, bad
    assert not extra, extra


def test_c06_dyadic_sparse_variance_shape():
    t0 = time.perf_counter()
    rows = suites.dyadic_sparse_rows(SeedSpec(SEED).child(2))
    bad = failures(rows)
    worst = max(r["var"] / r["bound_rhs"] for r in rows)
    assert report(6, not bad, f"n=2^31, {len(rows)} cells, max Var/bound = {worst:.3f}", t0, 600), bad


def test_c07_end_to_end_embeddings():
    t0 = time.perf_counter()
    rows = suites.suite_embedding(SEED)
    msg = "; ".join(f"{r['check']}: {round(r['mean'] * r['trials'])}/{r['trials']}" for r in rows)
    assert report(7, all(r["pass"] for r in rows), msg, t0, 600), failures(rows)


def test_c08_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    kinds = {
        "DenseGaussian": lambda s, n: emb.build_dense_embedder(s, n, 12),
        "Accelerated FJLT": lambda s, n: emb.build_accelerated_embedder(s, n, 10, "FJLT", 8),
        "Accelerated SJLT": lambda s, n: emb.build_accelerated_embedder(s, n, 10, "SJLT", 9, 3),
        "SubsampledCirculant first_m": lambda s, n: emb.build_subsampled_circulant_embedder(s, n, "first_m", 6),
        "SubsampledCirculant uniform": lambda s, n: emb.build_subsampled_circulant_embedder(s, n, "uniform", 6),
        "SubsampledCirculant dyadic": lambda s, n: emb.build_subsampled_circulant_embedder(s, n, "dyadic", 4),
        "SignedCirculant uniform": lambda s, n: emb.build_signed_circulant_embedder(s, n, "uniform", 7),
        "SignedCirculant first_m toeplitz": lambda s, n: emb.build_signed_circulant_embedder(s, n, "first_m", 7, True),
        "MedianFast FJLT": lambda s, n: emb.build_median_fast_embedder(s, n, 8, 3, 4, "FJLT"),
        "MedianFast SJLT": lambda s, n: emb.build_median_fast_embedder(s, n, 12, 2, 5, "SJLT", 4),
        "MedianFast toeplitz": lambda s, n: emb.build_median_fast_embedder(s, n, 8, 2, 4, "FJLT", toeplitz=True),
    }
    mismatched = []
    for name, build in kinds.items():
        for k in range(100):
            n = int(rng.integers(9, 33))
            e = build(SeedSpec(SEED, 0, (k,)), n)
            X = rng.standard_normal((5, n))
            if not np.array_equal(emb.embed_many(e, X), sign_map(X @ e.dense().T)):
                mismatched.append((name, k))
    ok = report(8, not mismatched, f"{len(kinds)} kinds x 100 instances, {len(mismatched)} mismatches", t0, 60)
    assert ok, mismatched[:5]


def test_c09_kernel_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 129))
        g = rng.standard_normal(n)
        y = rng.standard_normal(n)
        ref = tr.circulant_matvec_direct(tr.CirculantSpec(g), y)
        for backend in ("builtin", "numpy"):
            got = tr.circulant_matvec_fft(tr.CirculantSpec(g), y, backend)
            worst = max(worst, np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-3)))
        gt = rng.standard_normal(2 * n - 1)
        spec = tr.CirculantSpec(gt, "toeplitz")
        T = spec.dense()
        direct = np.array([math.fsum(T[i] * y) for i in range(n)])
        got = tr.toeplitz_matvec(spec, y)
        worst = max(worst, np.max(np.abs(got - direct) / np.maximum(np.abs(direct), 1e-3)))
    fw = 0.0
    for k in range(1, 11):
        x = rng.standard_normal(1 << k)
        h = tr.fwht(x)
        fw = max(fw, np.max(np.abs(tr.fwht(h) - x)), abs(np.linalg.norm(h) - np.linalg.norm(x)))
    ok = worst <= 1e-9 and fw <= 1e-9
    assert report(9, ok, f"max circulant/toeplitz rel err {worst:.2e}, fwht err {fw:.2e}", t0, 60)


def test_c10_running_time_shapes():
    t0 = time.perf_counter()
    with bench.single_threaded():
        circ = bench.circulant_stage(SEED, [1 << 14, 1 << 16, 1 << 18], reps=7)
        td, ts, speed = bench.sjlt_sparse_speedup(SEED, 1 << 16, reps=7)
        dense = bench.dense_growth(SEED, [1 << 14, 1 << 16], reps=7)
    ratios = [r["ratio_4n"] for r in circ[:2]]
    growth = dense[0]["ratio_4n"]
    ok = all(r <= 8 for r in ratios) and speed >= 2 and growth >= 3
    msg = (f"circulant ratios {ratios[0]:.2f} (2^14), {ratios[1]:.2f} (2^16); "
           f"SJLT sparse speedup {speed:.1f}x; dense growth {growth:.2f}x")
    assert report(10, ok, msg, t0, 600)


def test_c11_proofgap_regression():
    t0 = time.perf_counter()
    row = suites.suite_proofgap(SEED)[0]
    msg = f"{row['check']}: Cov = {row['mean']:.4f}, SE = {row['se_mean']:.5f}"
    assert report(11, row["pass"], msg, t0, 120)
