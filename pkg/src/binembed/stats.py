"""Monte Carlo and quadrature machinery for the variance/covariance bounds.

Every estimate carries a standard error. Vectorized samplers process trials
in fixed-size blocks; block ``b`` draws from ``trial_seed(seed, experiment, b)``
so a table is a pure function of (seed, parameters), independent of how the
blocks are scheduled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import embeddings as emb
from . import metrics
from .codes import sign_map
from .randomness import SeedSpec, as_seed, trial_seed
from .transforms import circulant_apply, shift_apply, toeplitz_apply

# experiment ids keep the trial streams of different samplers disjoint
EXP_GENERIC, EXP_CIRCULANT, EXP_DYADIC, EXP_AB, EXP_COV, EXP_DENSE = range(1, 7)


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    variance: float
    std_error_mean: float
    std_error_variance: float
    trials: int
    seed: SeedSpec | None = None


def moments(samples, seed: SeedSpec | None = None) -> MomentEstimate:
    """Sample mean and unbiased variance with standard errors.

    SE of the variance uses sqrt((m4 - s^4) / T), m4 the fourth central moment.
    """
    x = np.asarray(samples, dtype=float).ravel()
    T = x.size
    if T < 2:
        raise ValueError("need at least two trials")
    mean = math.fsum(x) / T
    c = x - mean
    var = math.fsum(c * c) / (T - 1)
    m4 = math.fsum(c ** 4) / T
    se_var = math.sqrt(max(m4 - var * var, 0.0) / T)
    return MomentEstimate(mean, var, math.sqrt(var / T), se_var, T, seed)


# --------------------------------------------------------------------------
# distance samples


def sample_distances(recipe: Callable[[SeedSpec], emb.BinaryEmbedder], P, Q,
                     trials: int, seed, experiment_id: int = EXP_GENERIC) -> np.ndarray:
    """Fresh embedder per trial; returns an array (trials, n_pairs) of d(f(p), f(q)).

    The distance is the embedder's declared one (d_H or d_med).
    """
    seed = as_seed(seed)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if P.shape != Q.shape:
        raise ValueError("P and Q must have the same shape")
    out = np.empty((trials, P.shape[0]))
    X = np.concatenate([P, Q])
    for t in range(trials):
        e = recipe(trial_seed(seed, experiment_id, t))
        codes = emb.embed_many(e, X)
        out[t] = metrics.sign_disagreement(codes[: len(P)], codes[len(P):], e.num_blocks)
    return out


def estimate_moments(recipe, p, q, trials: int, seed) -> MomentEstimate:
    if trials < 2:
        raise ValueError("need at least two trials")
    for v in (p, q):
        if not np.any(np.asarray(v, dtype=float)):
            raise ValueError("p and q must be nonzero")
    seed = as_seed(seed)
    return moments(sample_distances(recipe, p, q, trials, seed)[:, 0], seed)


def _block_sizes(trials: int, block: int):
    for b, start in enumerate(range(0, trials, block)):
        yield b, min(block, trials - start)


def _subset_keys(rng, count: int, n: int, mmax: int) -> np.ndarray:
    """Per trial, the first mmax entries of a uniform random ordering of range(n)."""
    keys = rng.random((count, n))
    if mmax < n:
        part = np.argpartition(keys, mmax - 1, axis=1)[:, :mmax]
    else:
        part = np.tile(np.arange(n), (count, 1))
    order = np.argsort(np.take_along_axis(keys, part, axis=1), axis=1)
    return np.take_along_axis(part, order, axis=1)


def circulant_samples(n: int, ms: Sequence[int], P, Q, trials: int, seed, *,
                      I_mode: str = "uniform", signed: bool = True, toeplitz: bool = False,
                      backend: str = "numpy", experiment_id: int = EXP_CIRCULANT,
                      return_indicators: bool = False):
    """d_H samples of R_I C_g D_eps (or R_I C_g) for several m at once.

    One (g, eps, ordering) draw per trial serves every m: the index sets are
    nested prefixes (of a uniform ordering, of [n], or of the dyadic set), so
    each one has the right marginal law. ``toeplitz`` swaps C_g for T_g. Returns {m: array (trials, n_pairs)},
    plus the per-row indicators for the largest m when requested.
    """
    seed = as_seed(seed)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    X = np.concatenate([P, Q])
    npairs = P.shape[0]
    ms = sorted(int(m) for m in ms)
    mmax = ms[-1]
    if mmax > n:
        raise ValueError(f"m = {mmax} exceeds n = {n}")
    if I_mode == "dyadic":
        fixed = (1 << np.arange(mmax)) - 1
        if fixed[-1] >= n:
            raise ValueError("dyadic rows exceed the dimension")
    elif I_mode == "first_m":
        fixed = np.arange(mmax)
    elif I_mode != "uniform":
        raise ValueError(f"unknown index mode {I_mode!r}")
    block = max(1, (1 << 21) // (X.shape[0] * n))
    out = {m: np.empty((trials, npairs)) for m in ms}
    indicators = np.empty((trials, npairs, mmax), dtype=bool) if return_indicators else None
    done = 0
    for b, count in _block_sizes(trials, block):
        rng = trial_seed(seed, experiment_id, b).generator()
        g = rng.standard_normal((count, 2 * n - 1 if toeplitz else n))
        eps = 2.0 * rng.integers(0, 2, size=(count, n)) - 1.0 if signed else None
        rows = _subset_keys(rng, count, n, mmax) if I_mode == "uniform" else None
        Y = X[None, :, :] * eps[:, None, :] if signed else np.broadcast_to(X, (count,) + X.shape)
        if toeplitz:
            full = toeplitz_apply(g[:, None, :], Y, backend)
        else:
            full = circulant_apply(g[:, None, :], Y, backend)
        if rows is None:
            vals = full[:, :, fixed]
        else:
            vals = np.take_along_axis(full, rows[:, None, :], axis=2)
        s = sign_map(vals)
        diff = s[:, :npairs] != s[:, npairs:]
        csum = np.cumsum(diff, axis=2)
        for m in ms:
            out[m][done:done + count] = csum[:, :, m - 1] / m
        if return_indicators:
            indicators[done:done + count] = diff
        done += count
    if return_indicators:
        return out, indicators
    return out


def dense_samples(n: int, ms: Sequence[int], P, Q, trials: int, seed) -> dict:
    """d_H samples of sgn(G x) with fresh m x n Gaussian G, rows nested over m."""
    seed = as_seed(seed)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    X = np.concatenate([P, Q])
    npairs = P.shape[0]
    ms = sorted(int(m) for m in ms)
    mmax = ms[-1]
    block = max(1, (1 << 21) // (mmax * n))
    out = {m: np.empty((trials, npairs)) for m in ms}
    done = 0
    for b, count in _block_sizes(trials, block):
        rng = trial_seed(seed, EXP_DENSE, b).generator()
        G = rng.standard_normal((count, mmax, n))
        s = sign_map(G @ X.T)  # (count, mmax, 2 * npairs)
        csum = np.cumsum(s[:, :, :npairs] != s[:, :, npairs:], axis=1)
        for m in ms:
            out[m][done:done + count] = csum[:, m - 1, :] / m
        done += count
    return out


@dataclass(frozen=True)
class SparseVector:
    """A vector in R^n given by 0-based support and values (n may be huge)."""

    n: int
    support: np.ndarray
    values: np.ndarray

    def dense(self) -> np.ndarray:
        v = np.zeros(self.n)
        v[self.support] = self.values
        return v


def dyadic_row_positions(n: int, rows: np.ndarray, support: np.ndarray) -> np.ndarray:
    """0-based generator positions read by 1-based rows ``rows`` of C_g on ``support``.

    Row l of C_g is T^{n-l} g, whose 0-based entry j is g[(j - l) % n].
    """
    return (support[None, :] - rows[:, None]) % n


def dyadic_sparse_samples(n: int, ms: Sequence[int], pairs: Sequence[tuple[SparseVector, SparseVector]],
                          trials: int, seed, experiment_id: int = EXP_DYADIC) -> dict:
    """d_H samples of R_I C_g on sparse pairs with I the first m dyadic integers.

    Only the generator entries the dyadic rows read on the supports are drawn;
    they are i.i.d. N(0, 1), so the law matches the full construction for any n.
    """
    seed = as_seed(seed)
    ms = sorted(int(m) for m in ms)
    mmax = ms[-1]
    if (1 << (mmax - 1)) > n:
        raise ValueError(f"2^(m-1) exceeds n = {n}")
    rows = 1 << np.arange(mmax, dtype=np.int64)
    pos = [(dyadic_row_positions(n, rows, p.support), dyadic_row_positions(n, rows, q.support))
           for p, q in pairs]
    U, inv = np.unique(np.concatenate([a.ravel() for pq in pos for a in pq]), return_inverse=True)
    inv_split = np.split(inv, np.cumsum([a.size for pq in pos for a in pq])[:-1])
    out = {m: np.empty((trials, len(pairs))) for m in ms}
    block = max(1, (1 << 22) // max(U.size, 1))
    done = 0
    for b, count in _block_sizes(trials, block):
        gU = trial_seed(seed, experiment_id, b).generator().standard_normal((count, U.size))
        for k, (p, q) in enumerate(pairs):
            ip = inv_split[2 * k].reshape(pos[k][0].shape)
            iq = inv_split[2 * k + 1].reshape(pos[k][1].shape)
            vp = gU[:, ip] @ p.values
            vq = gU[:, iq] @ q.values
            csum = np.cumsum(sign_map(vp) != sign_map(vq), axis=1)
            for m in ms:
                out[m][done:done + count, k] = csum[:, m - 1] / m
        done += count
    return out


# --------------------------------------------------------------------------
# Gaussian sign-flip probabilities


def f_ab_montecarlo(a: float, b: float, trials: int, seed,
                    block: int = 1 << 20) -> MomentEstimate:
    """P(sgn g1 != sgn(g1 + a g3), sgn g2 != sgn(g2 + b g3)) for iid N(0,1) g's."""
    seed = as_seed(seed)
    hits = np.empty(trials, dtype=bool)
    done = 0
    for k, count in _block_sizes(trials, block):
        g = trial_seed(seed, EXP_AB, k).generator().standard_normal((3, count))
        e1 = sign_map(g[0]) != sign_map(g[0] + a * g[2])
        e2 = sign_map(g[1]) != sign_map(g[1] + b * g[2])
        hits[done:done + count] = e1 & e2
        done += count
    return moments(hits, seed)


def f_aa_derivative(t):
    """d/da f(a, a) evaluated at a = t."""
    t = np.asarray(t, dtype=float)
    return t / ((t * t + 1.0) * np.sqrt(2.0 * t * t + 1.0)) / np.pi


def f_aa_quadrature(a: float) -> float:
    """f(a, a) as the integral of its derivative from 0 to a (adaptive Gauss-Kronrod)."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if a == 0:
        return 0.0
    # split at 1: the integrand peaks near t ~ 0.6 and decays like 1/t^2
    pieces = [(0.0, min(a, 1.0))] + ([(1.0, a)] if a > 1.0 else [])
    total = 0.0
    for lo, hi in pieces:
        val, _ = integrate.quad(f_aa_derivative, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
        total += val
    return total


# --------------------------------------------------------------------------
# covariance of sign-disagreement indicators


@dataclass(frozen=True)
class CovarianceEstimate:
    value: float
    std_error: float
    trials: int
    bound_rhs: float
    mean_x: float = float("nan")
    mean_y: float = float("nan")


def _check_unit(vectors, tol: float = 1e-9):
    for v in vectors:
        if abs(np.linalg.norm(v) - 1.0) > tol:
            raise ValueError("inputs must be unit vectors")


def cov_bound_rhs(x1, x2, y1, y2) -> float:
    """8 * max |<x_i, y_j>|."""
    x1, x2, y1, y2 = (np.asarray(v, dtype=float) for v in (x1, x2, y1, y2))
    return 8.0 * max(abs(x1 @ y1), abs(x1 @ y2), abs(x2 @ y1), abs(x2 @ y2))


def estimate_indicator_covariance(x1, x2, y1, y2, trials: int, seed,
                                  block: int = 1 << 18) -> CovarianceEstimate:
    """Cov(1[Z(x1) != Z(x2)], 1[Z(y1) != Z(y2)]) with Z(x) = sgn<g, x>, g ~ N(0, I)."""
    V = np.stack([np.asarray(v, dtype=float) for v in (x1, x2, y1, y2)])
    _check_unit(V)
    if trials < 2:
        raise ValueError("need at least two trials")
    seed = as_seed(seed)
    X = np.empty(trials, dtype=bool)
    Y = np.empty(trials, dtype=bool)
    done = 0
    for k, count in _block_sizes(trials, block):
        g = trial_seed(seed, EXP_COV, k).generator().standard_normal((count, V.shape[1]))
        z = sign_map(g @ V.T)
        X[done:done + count] = z[:, 0] != z[:, 1]
        Y[done:done + count] = z[:, 2] != z[:, 3]
        done += count
    value, se = sample_covariance(X, Y)
    return CovarianceEstimate(value, se, trials, cov_bound_rhs(*V),
                              float(X.mean()), float(Y.mean()))


def sample_covariance(X, Y) -> tuple[float, float]:
    """Unbiased sample covariance and its delta-method standard error."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    T = X.size
    cx = X - math.fsum(X) / T
    cy = Y - math.fsum(Y) / T
    prod = cx * cy
    value = math.fsum(prod) / (T - 1)
    se = math.sqrt(max(math.fsum((prod - value) ** 2) / (T - 1), 0.0) / T)
    return value, se


def radcov_bound_rhs(p, q, k: int) -> float:
    """8 (|p*T^k p| + |p*T^k q| + |q*T^k p| + |q*T^k q|) for a shift k = j - i."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    n = p.size
    r = k % n
    if r == 0 or 2 * r == n:
        raise ValueError(f"shift k={k} is excluded (k = 0 or n/2 mod n)")
    Tp, Tq = shift_apply(p, r), shift_apply(q, r)
    return 8.0 * sum(float(np.linalg.norm(u * v)) for u in (p, q) for v in (Tp, Tq))


def shifted_overlap_total(p, q) -> float:
    """sum_{k=1..n} |p * T^k q|^2, equal to 1 for unit p, q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(sum(np.sum((p * shift_apply(q, k)) ** 2) for k in range(1, p.size + 1)))


def spreadness(p, q) -> float:
    """max(|p|_inf, |q|_inf); a diagnostic only."""
    return float(max(np.max(np.abs(p)), np.max(np.abs(q))))


# --------------------------------------------------------------------------
# variance curves


TABLE_COLUMNS = ("kind", "n", "m", "nprime", "B", "s", "trials", "seed",
                 "mean", "var", "se_mean", "se_var", "bound_rhs", "pass")


@dataclass
class VarianceCurve:
    kind: str
    rows: list[dict] = field(default_factory=list)
    slope: float = float("nan")
    slope_ms: tuple[int, ...] = ()

    def mean_variance(self, n: int, m: int) -> float:
        v = [r["var"] for r in self.rows if r["n"] == n and r["m"] == m]
        return float(np.mean(v))


def loglog_slope(ms, values) -> float:
    x = np.log(np.asarray(ms, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def variance_curve(kind: str, grid: Sequence[tuple[int, int]], pair_generator, trials: int,
                   seed, *, I_mode: str = "uniform", bound=None) -> VarianceCurve:
    """One MomentEstimate row per (grid point, pair) plus a log-log slope.

    ``kind`` is DenseGaussian, SignedCirculant or SubsampledCirculant;
    ``pair_generator(n)`` returns a list of (p, q). ``bound(n, m)``, if given,
    fills the bound_rhs column (pass is then var <= bound). The slope is fitted
    on the mean variance over pairs, on grid points with m <= sqrt(n) when there
    are at least two of them at the largest n.
    """
    if not grid:
        raise ValueError("empty grid")
    seed = as_seed(seed)
    curve = VarianceCurve(kind)
    by_n: dict[int, list[int]] = {}
    for n, m in grid:
        by_n.setdefault(int(n), []).append(int(m))
    for n, ms in by_n.items():
        pairs = pair_generator(n)
        P = np.array([p for p, _ in pairs])
        Q = np.array([q for _, q in pairs])
        if kind == "DenseGaussian":
            samples = dense_samples(n, ms, P, Q, trials, seed)
        elif kind in ("SignedCirculant", "SubsampledCirculant"):
            samples = circulant_samples(n, ms, P, Q, trials, seed, I_mode=I_mode,
                                        signed=kind == "SignedCirculant")
        else:
            raise ValueError(f"variance curves are not defined for kind {kind!r}")
        for m in ms:
            for k in range(len(pairs)):
                est = moments(samples[m][:, k], seed)
                rhs = bound(n, m) if bound is not None else float("nan")
                curve.rows.append({
                    "kind": kind, "n": n, "m": m, "nprime": "", "B": "", "s": "",
                    "trials": trials, "seed": seed.master_seed, "mean": est.mean,
                    "var": est.variance, "se_mean": est.std_error_mean,
                    "se_var": est.std_error_variance, "bound_rhs": rhs,
                    "pass": bool(est.variance <= rhs) if bound is not None else "",
                    "pair": k,
                })
    n_top = max(by_n)
    fit_ms = sorted(m for m in by_n[n_top] if m * m <= n_top)
    if len(fit_ms) < 2:
        fit_ms = sorted(by_n[n_top])
    if len(fit_ms) >= 2:
        curve.slope = loglog_slope(fit_ms, [curve.mean_variance(n_top, m) for m in fit_ms])
        curve.slope_ms = tuple(fit_ms)
    return curve


def fit_constant(shape_values: dict, variances: dict, base) -> float:
    """C with variance(base) = C * shape(base)."""
    return variances[base] / shape_values[base]


# --------------------------------------------------------------------------
# delta-binary-embedding check


def check_delta_embedding(e: emb.BinaryEmbedder, D, delta: float):
    """max over pairs of |d(f(p), f(q)) - d_S(p, q)|, pass flag and the worst pair."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if D.shape[0] < 2:
        raise ValueError("need at least two points")
    codes = emb.embed_many(e, D)
    iu = np.triu_indices(D.shape[0], k=1)
    code_d = metrics.sign_disagreement(codes[iu[0]], codes[iu[1]], e.num_blocks)
    dev = np.abs(code_d - metrics.pairwise_geodesic(D))
    worst = int(np.argmax(dev))
    max_dev = float(dev[worst])
    return max_dev, max_dev <= delta, (int(iu[0][worst]), int(iu[1][worst]))


def pairwise_indicator_covariances(indicators: np.ndarray):
    """Cov(X_k, X_l) and SEs for k < l from a (trials, m) indicator array."""
    m = indicators.shape[1]
    out = {}
    for k, l in itertools.combinations(range(m), 2):
        out[(k, l)] = sample_covariance(indicators[:, k], indicators[:, l])
    return out
