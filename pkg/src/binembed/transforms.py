"""Deterministic linear kernels: shifts, circulant/Toeplitz products, FWHT.

Index convention: formulas are written 1-based with addition mod n mapping
into [1, n]; arrays are 0-based, so entry ``x[k]`` stores x_{k+1}.

Under that translation the circulant matrix C_x (row i equal to T^{n-i} x)
has 0-based entries ``C[i, j] = x[(j - i - 1) % n]``, which is the circular
convolution of ``y`` with ``x[::-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fft as _fft

FFT_RTOL = 1e-9
FFT_ATOL = 1e-12


def as_vector(x, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if v.size == 0:
        raise ValueError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


@dataclass(frozen=True)
class CirculantSpec:
    """Generator of C_g (``mode="circulant"``) or of T_g (``mode="toeplitz"``).

    A Toeplitz generator has odd length 2n - 1 and describes an n x n matrix.
    """

    generator: np.ndarray
    mode: str = "circulant"

    def __post_init__(self):
        g = as_vector(self.generator, "generator")
        if self.mode not in ("circulant", "toeplitz"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "toeplitz" and g.size % 2 == 0:
            raise ValueError("toeplitz generator must have odd length 2n-1")
        g.flags.writeable = False
        object.__setattr__(self, "generator", g)

    @property
    def dim(self) -> int:
        if self.mode == "toeplitz":
            return (self.generator.size + 1) // 2
        return self.generator.size

    def dense(self) -> np.ndarray:
        n = self.dim
        i = np.arange(n)[:, None]
        j = np.arange(n)[None, :]
        if self.mode == "toeplitz":
            return self.generator[(j - i - 1) % (2 * n - 1)]
        return self.generator[(j - i - 1) % n]


def shift_apply(x, k: int) -> np.ndarray:
    """T^k x, i.e. ``result_i = x_{i+k}`` cyclically."""
    x = as_vector(x)
    return np.roll(x, -(int(k) % x.size))


def circulant_matvec_direct(spec: CirculantSpec, y) -> np.ndarray:
    """O(n^2) evaluation, row by row as <T^{n-i} g, y>."""
    if spec.mode != "circulant":
        raise ValueError("circulant_matvec_direct needs a circulant spec")
    y = as_vector(y, "y")
    g = spec.generator
    n = g.size
    if y.size != n:
        raise ValueError(f"dimension mismatch: generator {n}, vector {y.size}")
    out = np.empty(n)
    for i in range(1, n + 1):
        out[i - 1] = shift_apply(g, n - i) @ y
    return out


def _rfft(x: np.ndarray, backend: str) -> np.ndarray:
    if backend == "builtin":
        return _fft.rfft(x)
    if backend == "numpy":
        return np.fft.rfft(x)
    raise ValueError(f"unknown FFT backend {backend!r}")


def _irfft(X: np.ndarray, n: int, backend: str) -> np.ndarray:
    if backend == "builtin":
        return _fft.irfft(X, n)
    if backend == "numpy":
        return np.fft.irfft(X, n=n)
    raise ValueError(f"unknown FFT backend {backend!r}")


def circulant_spectrum(generators, backend: str = "builtin") -> np.ndarray:
    """rfft of the reversed generator; C_g y is the inverse rfft of spectrum * rfft(y)."""
    g = np.asarray(generators, dtype=float)
    return _rfft(g[..., ::-1], backend)


def circulant_apply_spectrum(spectrum, y, backend: str = "builtin") -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    if spectrum.shape[-1] != n // 2 + 1:
        raise ValueError(f"dimension mismatch: spectrum for {2 * (spectrum.shape[-1] - 1)}, vector {n}")
    return _irfft(spectrum * _rfft(y, backend), n, backend)


def circulant_apply(generators, y, backend: str = "builtin") -> np.ndarray:
    """Batched C_g y along the last axis; shapes broadcast like numpy arrays."""
    g = np.asarray(generators, dtype=float)
    y = np.asarray(y, dtype=float)
    if g.shape[-1] != y.shape[-1]:
        raise ValueError(
            f"dimension mismatch: generator {g.shape[-1]}, vector {y.shape[-1]}"
        )
    return circulant_apply_spectrum(circulant_spectrum(g, backend), y, backend)


def circulant_matvec_fft(spec: CirculantSpec, y, backend: str = "builtin") -> np.ndarray:
    if spec.mode != "circulant":
        raise ValueError("use toeplitz_matvec for Toeplitz specs")
    y = as_vector(y, "y")
    return circulant_apply(spec.generator, y, backend)


def toeplitz_embedding(generator) -> np.ndarray:
    """Length-2n circulant generator whose upper-left n x n block is T_g.

    A zero is inserted at (1-based) position n: that offset is never reached
    inside the n x n block.
    """
    g = np.asarray(generator, dtype=float)
    n = (g.shape[-1] + 1) // 2
    zero = np.zeros(g.shape[:-1] + (1,))
    return np.concatenate([g[..., : n - 1], zero, g[..., n - 1:]], axis=-1)


def toeplitz_spectrum(generators, backend: str = "builtin") -> np.ndarray:
    g = np.asarray(generators, dtype=float)
    if g.shape[-1] % 2 == 0:
        raise ValueError("toeplitz generator must have odd length 2n-1")
    return circulant_spectrum(toeplitz_embedding(g), backend)


def toeplitz_apply_spectrum(spectrum, y, backend: str = "builtin") -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    padded = np.concatenate([y, np.zeros(y.shape)], axis=-1)
    return circulant_apply_spectrum(spectrum, padded, backend)[..., :n]


def toeplitz_apply(generators, y, backend: str = "builtin") -> np.ndarray:
    """Batched T_g y; ``generators`` has last axis 2n-1, ``y`` has n."""
    g = np.asarray(generators, dtype=float)
    y = np.asarray(y, dtype=float)
    if g.shape[-1] % 2 == 0:
        raise ValueError("toeplitz generator must have odd length 2n-1")
    n = (g.shape[-1] + 1) // 2
    if y.shape[-1] != n:
        raise ValueError(f"dimension mismatch: toeplitz size {n}, vector {y.shape[-1]}")
    return toeplitz_apply_spectrum(toeplitz_spectrum(g, backend), y, backend)


def toeplitz_matvec(spec: CirculantSpec, y, backend: str = "builtin") -> np.ndarray:
    if spec.mode != "toeplitz":
        raise ValueError("toeplitz_matvec needs a toeplitz spec")
    return toeplitz_apply(spec.generator, as_vector(y, "y"), backend)


def fwht(x) -> np.ndarray:
    """Orthonormal Walsh-Hadamard transform (Sylvester order) along the last axis."""
    x = np.array(x, dtype=float)
    n = x.shape[-1]
    if not _fft.is_power_of_two(n):
        raise ValueError(f"FWHT length must be a power of two, got {n}")
    batch = x.shape[:-1]
    h = 1
    while h < n:
        blocks = x.reshape(batch + (n // (2 * h), 2, h))
        a = blocks[..., 0, :]
        b = blocks[..., 1, :]
        x = np.stack([a + b, a - b], axis=-2).reshape(batch + (n,))
        h *= 2
    return x / np.sqrt(n)


def hadamard_matrix(n: int) -> np.ndarray:
    """Dense orthonormal Hadamard matrix, for oracles only."""
    if not _fft.is_power_of_two(n):
        raise ValueError(f"Hadamard order must be a power of two, got {n}")
    H = np.ones((1, 1))
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H / np.sqrt(n)


def restrict(x, indices) -> np.ndarray:
    """R_I x for a 1-based, strictly increasing index set."""
    x = as_vector(x)
    idx = np.asarray(getattr(indices, "indices", indices), dtype=np.int64)
    if idx.size and (idx.min() < 1 or idx.max() > x.size):
        raise IndexError(f"index set out of range for dimension {x.size}")
    return x[idx - 1]


def sign_flip(x, eps) -> np.ndarray:
    """D_eps x."""
    x = as_vector(x)
    e = as_vector(eps, "eps")
    if e.size != x.size:
        raise ValueError(f"dimension mismatch: {x.size} vs {e.size}")
    if not np.all(np.abs(e) == 1.0):
        raise ValueError("eps entries must be +1 or -1")
    return x * e
