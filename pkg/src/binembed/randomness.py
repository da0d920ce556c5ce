"""Seeded samplers for every random object in the constructions.

All draws come from a Philox (counter-based) bit generator keyed by a
:class:`SeedSpec`. Nothing touches numpy's global RNG state.

Monte Carlo streams: trial ``t`` of experiment ``e`` uses
``stream_id = trial_stream(e, t)``, an injective map, so results do not depend
on execution order. Vectorized experiments treat a fixed-size block of trials
as the unit and key it the same way with the block index in place of ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_U64 = (1 << 64) - 1
_TRIAL_BITS = 40


def parse_seed(text) -> int:
    """Accept decimal or 0x-prefixed hex seeds."""
    if isinstance(text, (int, np.integer)):
        value = int(text)
    else:
        s = str(text).strip().lower()
        value = int(s, 16) if s.startswith("0x") else int(s, 10)
    if not 0 <= value <= _U64:
        raise ValueError(f"seed {text!r} is not a 64-bit unsigned integer")
    return value


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_id: int = 0
    path: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) <= _U64:
                raise ValueError(f"{name} must fit in 64 unsigned bits, got {v}")
            object.__setattr__(self, name, int(v))
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))

    def child(self, *keys: int) -> "SeedSpec":
        """Independent sub-stream, e.g. for the components of one embedder."""
        return SeedSpec(self.master_seed, self.stream_id, self.path + tuple(keys))

    def with_stream(self, stream_id: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream_id, self.path)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_id,) + self.path
        )
        return np.random.Generator(np.random.Philox(ss))

    def to_dict(self) -> dict:
        return {"master_seed": self.master_seed, "stream_id": self.stream_id,
                "path": list(self.path)}

    @classmethod
    def from_dict(cls, d: dict) -> "SeedSpec":
        return cls(int(d["master_seed"]), int(d.get("stream_id", 0)),
                   tuple(d.get("path", ())))


def as_seed(seed) -> SeedSpec:
    if isinstance(seed, SeedSpec):
        return seed
    return SeedSpec(parse_seed(seed))


def trial_stream(experiment_id: int, trial: int) -> int:
    if not 0 <= trial < (1 << _TRIAL_BITS):
        raise ValueError(f"trial index {trial} out of range")
    if not 0 <= experiment_id < (1 << (64 - _TRIAL_BITS)):
        raise ValueError(f"experiment id {experiment_id} out of range")
    return (experiment_id << _TRIAL_BITS) | trial


def trial_seed(seed: SeedSpec, experiment_id: int, trial: int) -> SeedSpec:
    return seed.with_stream(trial_stream(experiment_id, trial))


def _check_dim(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return n


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing 1-based indices into [ambient_dim]."""

    indices: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        n = int(self.ambient_dim)
        if idx.size > n:
            raise ValueError("index set larger than ambient dimension")
        if idx.size and (idx[0] < 1 or idx[-1] > n):
            raise ValueError(f"indices must lie in [1, {n}]")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("indices must be strictly increasing")
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "ambient_dim", n)

    def __len__(self) -> int:
        return self.indices.size

    @property
    def zero_based(self) -> np.ndarray:
        return self.indices - 1

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(np.arange(1, n + 1), n)

    @classmethod
    def first(cls, n: int, m: int) -> "IndexSet":
        if not 1 <= m <= n:
            raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
        return cls(np.arange(1, m + 1), n)


def gaussian_vector(seed, n: int) -> np.ndarray:
    return as_seed(seed).generator().standard_normal(_check_dim(n))


def rademacher_vector(seed, n: int) -> np.ndarray:
    bits = as_seed(seed).generator().integers(0, 2, size=_check_dim(n))
    return 2.0 * bits - 1.0


def partial_fisher_yates(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """First m entries of a uniformly shuffled range(n), 0-based, unsorted."""
    perm = np.arange(n)
    picks = rng.integers(np.arange(m), n)
    for i, j in enumerate(picks):
        perm[i], perm[j] = perm[j], perm[i]
    return perm[:m]


def uniform_subset(seed, n: int, m: int) -> IndexSet:
    n = _check_dim(n)
    if not 1 <= m <= n:
        raise ValueError(f"subset size must satisfy 1 <= m <= n, got m={m}, n={n}")
    picks = partial_fisher_yates(as_seed(seed).generator(), n, m)
    return IndexSet(np.sort(picks) + 1, n)


def dyadic_set(n: int, m: int) -> IndexSet:
    """{1, 2, 4, ..., 2^(m-1)} inside [n]."""
    n = _check_dim(n)
    if m < 1:
        raise ValueError("m must be >= 1")
    if (1 << (m - 1)) > n:
        raise ValueError(f"2^(m-1) = {1 << (m - 1)} exceeds n = {n}")
    return IndexSet(1 << np.arange(m, dtype=np.int64), n)


@dataclass(frozen=True)
class SjltPattern:
    """Column-wise sparsity pattern: ``rows[j]`` are the s nonzero rows of column j."""

    rows: np.ndarray  # (n, s), 0-based row indices
    signs: np.ndarray  # (n, s), entries +-1
    nprime: int

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def s(self) -> int:
        return self.rows.shape[1]

    @property
    def scale(self) -> float:
        return 1.0 / np.sqrt(self.s)

    def dense(self) -> np.ndarray:
        M = np.zeros((self.nprime, self.n))
        cols = np.repeat(np.arange(self.n), self.s)
        M[self.rows.ravel(), cols] = self.signs.ravel() * self.scale
        return M


def sjlt_pattern(seed, n: int, nprime: int, s: int) -> SjltPattern:
    n, nprime = _check_dim(n), _check_dim(nprime)
    if not 1 <= s <= nprime:
        raise ValueError(f"column sparsity must satisfy 1 <= s <= n', got s={s}")
    rng = as_seed(seed).generator()
    # s smallest of n' iid uniform keys: a uniform s-subset per column
    rows = np.argpartition(rng.random((n, nprime)), s - 1, axis=1)[:, :s]
    rows = np.sort(rows, axis=1)
    signs = 2.0 * rng.integers(0, 2, size=(n, s)) - 1.0
    return SjltPattern(rows, signs, nprime)
