"""Complex FFT for arbitrary lengths.

Power-of-two lengths use a vectorized radix-2 decimation-in-time scheme
(small dense DFT at the leaves, butterflies stacked along the last axis).
Every other length goes through Bluestein's chirp-z reduction to a
power-of-two convolution. All routines transform along the last axis and
accept arbitrary leading batch dimensions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

_LEAF = 32


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    return 1 << (n - 1).bit_length()


@lru_cache(maxsize=64)
def _leaf_matrix(size: int) -> np.ndarray:
    k = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(k, k) / size)


@lru_cache(maxsize=64)
def _twiddles(rows: int) -> np.ndarray:
    return np.exp(-1j * np.pi * np.arange(rows) / rows)[:, None]


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    batch = x.shape[:-1]
    leaf = min(n, _LEAF)
    cols = n // leaf
    # column c holds the stride-`cols` subsequence x[c], x[c + cols], ...
    X = _leaf_matrix(leaf) @ x.reshape(batch + (leaf, cols))
    if cols == 1:
        return X.reshape(batch + (n,))
    # radix-2 stages ping-pong between two buffers to avoid per-stage allocations
    spare = np.empty_like(X)
    prod = np.empty(batch + (n // 2,), dtype=complex)
    rows = leaf
    while rows < n:
        half = X.shape[-1] // 2
        even, odd = X[..., :half], X[..., half:]
        t = prod.reshape(batch + (rows, half))
        np.multiply(_twiddles(rows), odd, out=t)
        out = spare.reshape(batch + (2 * rows, half))
        np.add(even, t, out=out[..., :rows, :])
        np.subtract(even, t, out=out[..., rows:, :])
        spare, X = X, out
        rows *= 2
    return X.reshape(batch + (n,))


@lru_cache(maxsize=32)
def _bluestein_plan(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    size = next_power_of_two(2 * n - 1)
    k = np.arange(n, dtype=np.int64)
    # k^2 mod 2n keeps the chirp phase accurate for large k
    chirp = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    kernel = np.zeros(size, dtype=complex)
    kernel[:n] = np.conj(chirp)
    if n > 1:
        kernel[size - n + 1:] = np.conj(chirp[1:])[::-1]
    return chirp, _fft_pow2(kernel), size


def _fft_bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    chirp, kernel_hat, size = _bluestein_plan(n)
    padded = np.zeros(x.shape[:-1] + (size,), dtype=complex)
    padded[..., :n] = x * chirp
    conv = _ifft_pow2(_fft_pow2(padded) * kernel_hat)
    return conv[..., :n] * chirp


def _ifft_pow2(x: np.ndarray) -> np.ndarray:
    return np.conj(_fft_pow2(np.conj(x))) / x.shape[-1]


def fft(x) -> np.ndarray:
    """Unnormalized forward DFT along the last axis, any length >= 1."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n == 0:
        raise ValueError("cannot transform an empty axis")
    if is_power_of_two(n):
        return _fft_pow2(x)
    return _fft_bluestein(x)


def ifft(x) -> np.ndarray:
    """Inverse of :func:`fft` (includes the 1/n factor)."""
    x = np.asarray(x, dtype=complex)
    return np.conj(fft(np.conj(x))) / x.shape[-1]


def _rfft_twiddles(n: int) -> np.ndarray:
    return np.exp(-2j * np.pi * np.arange(n // 2 + 1) / n)


def rfft(x) -> np.ndarray:
    """DFT bins 0..n//2 of a real signal.

    Even n packs x into the half-length complex signal x[0::2] + i x[1::2],
    halving the transform size; odd n falls back to the complex transform.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n % 2:
        return fft(x)[..., : n // 2 + 1]
    half = n // 2
    Z = fft(x[..., 0::2] + 1j * x[..., 1::2])
    Zr = np.conj(np.concatenate([Z[..., :1], Z[..., :0:-1], Z[..., :1]], axis=-1))  # conj(Z_{N-k})
    Z = np.concatenate([Z, Z[..., :1]], axis=-1)
    even = 0.5 * (Z + Zr)
    odd = -0.5j * (Z - Zr)
    return even + _rfft_twiddles(n) * odd


def irfft(X, n: int) -> np.ndarray:
    """Inverse of :func:`rfft` for a real signal of length n."""
    X = np.asarray(X, dtype=complex)
    if X.shape[-1] != n // 2 + 1:
        raise ValueError(f"expected {n // 2 + 1} bins for length {n}, got {X.shape[-1]}")
    if n % 2:
        full = np.concatenate([X, np.conj(X[..., :0:-1])], axis=-1)
        return ifft(full).real
    half = n // 2
    Xr = np.conj(X[..., ::-1])  # conj(X_{N-k})
    even = 0.5 * (X + Xr)
    odd = 0.5 * (X - Xr) / _rfft_twiddles(n)
    z = ifft((even + 1j * odd)[..., :half])
    out = np.empty(X.shape[:-1] + (n,))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out
