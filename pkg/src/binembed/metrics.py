"""Distances on the sphere and on the Hamming cube."""

from __future__ import annotations

import numpy as np

from .codes import BitCode


def geodesic(x, y) -> float:
    """Normalized geodesic distance arccos(<x,y>/(|x||y|))/pi, in [0, 1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("geodesic distance is undefined for the zero vector")
    c = np.clip((x @ y) / (nx * ny), -1.0, 1.0)
    return float(np.arccos(c) / np.pi)


def pairwise_geodesic(X) -> np.ndarray:
    """Condensed (i < j, row-major) vector of geodesic distances between rows."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("geodesic distance is undefined for the zero vector")
    U = X / norms[:, None]
    iu = np.triu_indices(X.shape[0], k=1)
    return np.arccos(np.clip((U @ U.T)[iu], -1.0, 1.0)) / np.pi


def hamming(a: BitCode, b: BitCode) -> float:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    diff = np.bitwise_count(np.bitwise_xor(a.packed, b.packed)).sum()
    return float(diff) / len(a)


def block_hamming(a: BitCode, b: BitCode, B: int) -> np.ndarray:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if B < 1 or len(a) % B:
        raise ValueError(f"code length {len(a)} is not divisible by B={B}")
    return (a.signs != b.signs).reshape(B, -1).mean(axis=1)


def lower_median(values, axis: int = -1) -> np.ndarray:
    """The ceil(B/2)-th order statistic along ``axis``."""
    v = np.sort(np.asarray(values, dtype=float), axis=axis)
    k = (v.shape[axis] + 1) // 2 - 1
    return np.take(v, k, axis=axis)


def median_block(a: BitCode, b: BitCode, B: int) -> float:
    return float(lower_median(block_hamming(a, b, B)))


def sign_disagreement(A, Bc, blocks: int = 1) -> np.ndarray:
    """Vectorized d_H (blocks=1) or d_med over the last axis of sign arrays."""
    diff = np.asarray(A) != np.asarray(Bc)
    if blocks == 1:
        return diff.mean(axis=-1)
    per_block = diff.reshape(diff.shape[:-1] + (blocks, -1)).mean(axis=-1)
    return lower_median(per_block)


def geo_bounds(x, y, tol: float = 1e-12) -> tuple[float, float]:
    """Upper bounds (|x-y|/2^{3/2}, sqrt(1-<x,y>^2)/2) on geodesic(x, y).

    Valid for unit vectors with nonnegative inner product.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for v in (x, y):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("geo_bounds expects unit vectors")
    ip = float(x @ y)
    if ip < -tol:
        raise ValueError(f"inner product must be nonnegative, got {ip}")
    ip = min(max(ip, 0.0), 1.0)
    return float(np.linalg.norm(x - y) / 2 ** 1.5), float(np.sqrt(1.0 - ip * ip) / 2)
