"""Dimension-reducing preconditioners and the dense Gaussian stage."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from . import metrics
from .fft import next_power_of_two
from .randomness import (
    IndexSet,
    SjltPattern,
    as_seed,
    gaussian_vector,
    rademacher_vector,
    sjlt_pattern,
    uniform_subset,
)
from .transforms import fwht, hadamard_matrix


@dataclass(frozen=True)
class JlTransform:
    """An n' x n linear map; ``variant`` is "FJLT", "SJLT" or "DenseGaussian".

    FJLT: sqrt(n_pad/n') R_I H D_eps applied after zero-padding to n_pad.
    SJLT: exactly s entries +-1/sqrt(s) per column.
    """

    variant: str
    in_dim: int
    out_dim: int
    index_set: IndexSet | None = None
    eps: np.ndarray | None = None
    pattern: SjltPattern | None = None
    matrix: np.ndarray | None = None

    @property
    def n_pad(self) -> int:
        return next_power_of_two(self.in_dim)

    @property
    def scale(self) -> float:
        if self.variant == "FJLT":
            return float(np.sqrt(self.n_pad / self.out_dim))
        if self.variant == "SJLT":
            return self.pattern.scale
        return 1.0

    def dense(self) -> np.ndarray:
        """Materialized matrix, for oracles at small n."""
        if self.variant == "DenseGaussian":
            return self.matrix.copy()
        if self.variant == "SJLT":
            return self.pattern.dense()
        H = hadamard_matrix(self.n_pad)[:, : self.in_dim]
        return self.scale * H[self.index_set.zero_based] * self.eps[: self.in_dim]


def build_fjlt(seed, n: int, nprime: int) -> JlTransform:
    seed = as_seed(seed)
    n_pad = next_power_of_two(n)
    if not 1 <= nprime <= n_pad:
        raise ValueError(f"FJLT needs 1 <= n' <= n_pad = {n_pad}, got {nprime}")
    I = uniform_subset(seed.child(0), n_pad, nprime)
    eps = rademacher_vector(seed.child(1), n_pad)
    return JlTransform("FJLT", n, nprime, index_set=I, eps=eps)


def build_sjlt(seed, n: int, nprime: int, s: int) -> JlTransform:
    pattern = sjlt_pattern(as_seed(seed).child(0), n, nprime, s)
    return JlTransform("SJLT", n, nprime, pattern=pattern)


def build_dense_gaussian(seed, n: int, m: int) -> JlTransform:
    if n < 1 or m < 1:
        raise ValueError(f"dimensions must be positive, got m={m}, n={n}")
    G = gaussian_vector(as_seed(seed).child(0), m * n).reshape(m, n)
    return JlTransform("DenseGaussian", n, m, matrix=G)


def _apply_sjlt(pattern: SjltPattern, x: np.ndarray) -> np.ndarray:
    # touches only the s rows of each nonzero column: O(s * nnz)
    out_shape = x.shape[:-1] + (pattern.nprime,)
    if x.ndim == 1:
        nz = np.flatnonzero(x)
        rows = pattern.rows[nz].ravel()
        w = (pattern.signs[nz] * x[nz, None]).ravel()
        return np.bincount(rows, weights=w, minlength=pattern.nprime) * pattern.scale
    flat = x.reshape(-1, x.shape[-1])
    out = np.stack([_apply_sjlt(pattern, v) for v in flat])
    return out.reshape(out_shape)


def apply(t: JlTransform, x) -> np.ndarray:
    """Image of x (last axis of length in_dim); leading axes are batched."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != t.in_dim:
        raise ValueError(f"dimension mismatch: transform expects {t.in_dim}, got {x.shape[-1]}")
    if t.variant == "DenseGaussian":
        return x @ t.matrix.T
    if t.variant == "SJLT":
        return _apply_sjlt(t.pattern, x)
    if t.variant == "FJLT":
        padded = np.zeros(x.shape[:-1] + (t.n_pad,))
        padded[..., : t.in_dim] = x
        return t.scale * fwht(padded * t.eps)[..., t.index_set.zero_based]
    raise ValueError(f"unknown variant {t.variant!r}")


@dataclass(frozen=True)
class IsometryReport:
    max_norm_distortion: float
    max_pair_distortion: float
    delta_target: float

    @property
    def passed(self) -> bool:
        return max(self.max_norm_distortion, self.max_pair_distortion) <= self.delta_target


def check_isometry(t: JlTransform, D, delta: float) -> IsometryReport:
    """Worst |‖Az‖/‖z‖ - 1| over z in D and over nonzero z in D - D."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if D.shape[0] == 0:
        raise ValueError("point set is empty")
    images = apply(t, D)
    norms = np.linalg.norm(D, axis=1)
    norm_dist = np.max(np.abs(np.linalg.norm(images, axis=1) / norms - 1.0))
    pair_dist = 0.0
    if D.shape[0] > 1:
        z = pdist(D)
        keep = z > 0.0
        if np.any(keep):
            pair_dist = np.max(np.abs(pdist(images)[keep] / z[keep] - 1.0))
    return IsometryReport(float(norm_dist), float(pair_dist), float(delta))


def max_geodesic_shift(t: JlTransform, D) -> float:
    """max_{i<j} |d(Ax_i, Ax_j) - d(x_i, x_j)| on the sphere."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    before = metrics.pairwise_geodesic(D)
    after = metrics.pairwise_geodesic(apply(t, D))
    return float(np.max(np.abs(after - before), initial=0.0))
