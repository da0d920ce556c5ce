"""Sign-map binary embeddings x -> sgn(Ax) for the five constructions.

Kinds and their matrices A:

* ``DenseGaussian``        G (m x n standard Gaussian)
* ``AcceleratedGaussian``  G Phi, Phi an FJLT or SJLT, G m x n'
* ``SubsampledCirculant``  R_I C_g
* ``SignedCirculant``      R_I C_g D_eps
* ``MedianFast``           [Psi_1; ...; Psi_B] Phi with Psi_s = R_{I_s} C_{g_s} D_{eps_s}

Embedders are immutable. They remember the recipe (kind, seed, parameters)
they were built from, which is all that gets serialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import jl, metrics
from .codes import BitCode, sign_map
from .fft import next_power_of_two
from .randomness import (
    IndexSet,
    as_seed,
    dyadic_set,
    gaussian_vector,
    rademacher_vector,
    SeedSpec,
    uniform_subset,
)
from .transforms import (
    CirculantSpec,
    circulant_apply_spectrum,
    circulant_spectrum,
    toeplitz_apply_spectrum,
    toeplitz_spectrum,
)

KINDS = ("DenseGaussian", "AcceleratedGaussian", "SubsampledCirculant",
         "SignedCirculant", "MedianFast")


@dataclass(frozen=True)
class CirculantBlock:
    """R_I C_g D_eps (``eps`` None means no sign randomization).

    With ``toeplitz`` set the generator has length 2n-1 and C_g is replaced
    by the Toeplitz matrix T_g.
    """

    generator: np.ndarray
    eps: np.ndarray | None
    index_set: IndexSet
    toeplitz: bool = False

    @property
    def dim(self) -> int:
        g = self.generator.size
        return (g + 1) // 2 if self.toeplitz else g

    def spectrum(self, backend: str = "builtin") -> np.ndarray:
        """Transform of the generator, computed once per backend."""
        cache = self.__dict__.setdefault("_spectra", {})
        if backend not in cache:
            make = toeplitz_spectrum if self.toeplitz else circulant_spectrum
            cache[backend] = make(self.generator, backend)
        return cache[backend]

    def apply(self, X, backend: str = "builtin") -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise ValueError(f"dimension mismatch: block {self.dim}, vector {X.shape[-1]}")
        if self.eps is not None:
            X = X * self.eps
        if self.toeplitz:
            full = toeplitz_apply_spectrum(self.spectrum(backend), X, backend)
        else:
            full = circulant_apply_spectrum(self.spectrum(backend), X, backend)
        return full[..., self.index_set.zero_based]

    def dense(self) -> np.ndarray:
        mode = "toeplitz" if self.toeplitz else "circulant"
        C = CirculantSpec(self.generator, mode).dense()
        if self.eps is not None:
            C = C * self.eps
        return C[self.index_set.zero_based]


def draw_block(seed: SeedSpec, n: int, index_set: IndexSet, signed: bool,
               toeplitz: bool = False) -> CirculantBlock:
    g = gaussian_vector(seed.child(0), 2 * n - 1 if toeplitz else n)
    eps = rademacher_vector(seed.child(1), n) if signed else None
    return CirculantBlock(g, eps, index_set, toeplitz)


@dataclass(frozen=True)
class BinaryEmbedder:
    kind: str
    in_dim: int
    preconditioner: jl.JlTransform | None = None
    gaussian: jl.JlTransform | None = None
    blocks: tuple[CirculantBlock, ...] = ()
    recipe: dict = field(default_factory=dict, compare=False)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks) if self.kind == "MedianFast" else 1

    @property
    def output_distance(self) -> str:
        return "median_block" if self.kind == "MedianFast" else "hamming"

    @property
    def m(self) -> int:
        if self.gaussian is not None:
            return self.gaussian.out_dim
        return sum(len(b.index_set) for b in self.blocks)

    def project(self, X, backend: str = "builtin") -> np.ndarray:
        """Real pre-sign values A x for a point or a batch of points."""
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.in_dim:
            raise ValueError(f"dimension mismatch: embedder expects {self.in_dim}, got {X.shape[-1]}")
        if self.preconditioner is not None:
            X = jl.apply(self.preconditioner, X)
        if self.gaussian is not None:
            return jl.apply(self.gaussian, X)
        return np.concatenate([b.apply(X, backend) for b in self.blocks], axis=-1)

    def dense(self) -> np.ndarray:
        """A as an explicit m x n matrix (oracle use)."""
        if self.gaussian is not None:
            A = self.gaussian.dense()
        else:
            A = np.vstack([b.dense() for b in self.blocks])
        if self.preconditioner is not None:
            A = A @ self.preconditioner.dense()
        return A

    def to_dict(self) -> dict:
        return dict(self.recipe)

    def to_json(self) -> str:
        return json.dumps(self.recipe, sort_keys=True)


def _recipe(kind: str, seed: SeedSpec, **params) -> dict:
    return {"kind": kind, "seed": seed.to_dict(), "params": params}


def build_dense_embedder(seed, n: int, m: int) -> BinaryEmbedder:
    seed = as_seed(seed)
    G = jl.build_dense_gaussian(seed.child(0), n, m)
    return BinaryEmbedder("DenseGaussian", n, gaussian=G,
                          recipe=_recipe("DenseGaussian", seed, n=n, m=m))


def _build_preconditioner(seed: SeedSpec, n: int, variant: str, nprime: int, s):
    if variant == "FJLT":
        return jl.build_fjlt(seed, n, nprime)
    if variant == "SJLT":
        if s is None:
            raise ValueError("SJLT preconditioner needs a column sparsity s")
        return jl.build_sjlt(seed, n, nprime, int(s))
    raise ValueError(f"unknown preconditioner variant {variant!r}")


def build_accelerated_embedder(seed, n: int, m: int, variant: str, nprime: int,
                               s: int | None = None) -> BinaryEmbedder:
    seed = as_seed(seed)
    phi = _build_preconditioner(seed.child(0), n, variant, nprime, s)
    G = jl.build_dense_gaussian(seed.child(1), nprime, m)
    return BinaryEmbedder(
        "AcceleratedGaussian", n, preconditioner=phi, gaussian=G,
        recipe=_recipe("AcceleratedGaussian", seed, n=n, m=m, variant=variant,
                       nprime=nprime, s=s),
    )


def resolve_index_set(I_mode, n: int, m: int, seed: SeedSpec) -> IndexSet:
    if isinstance(I_mode, IndexSet):
        if I_mode.ambient_dim != n:
            raise ValueError("explicit index set has the wrong ambient dimension")
        return I_mode
    if isinstance(I_mode, (list, tuple, np.ndarray)):
        return IndexSet(np.asarray(I_mode), n)
    if I_mode == "first_m":
        return IndexSet.first(n, m)
    if I_mode == "dyadic":
        return dyadic_set(n, m)
    if I_mode == "uniform":
        return uniform_subset(seed, n, m)
    raise ValueError(f"unknown index mode {I_mode!r}")


def _mode_param(I_mode):
    if isinstance(I_mode, IndexSet):
        return [int(i) for i in I_mode.indices]
    if isinstance(I_mode, (list, tuple, np.ndarray)):
        return [int(i) for i in I_mode]
    return I_mode


def build_subsampled_circulant_embedder(seed, n: int, I_mode, m: int) -> BinaryEmbedder:
    seed = as_seed(seed)
    I = resolve_index_set(I_mode, n, m, seed.child(0, 2))
    block = draw_block(seed.child(0), n, I, signed=False)
    return BinaryEmbedder(
        "SubsampledCirculant", n, blocks=(block,),
        recipe=_recipe("SubsampledCirculant", seed, n=n, m=len(I), I_mode=_mode_param(I_mode)),
    )


def build_signed_circulant_embedder(seed, n: int, I_mode, m: int,
                                    toeplitz: bool = False) -> BinaryEmbedder:
    seed = as_seed(seed)
    if m > n:
        raise ValueError(f"m = {m} exceeds n = {n}")
    I = resolve_index_set(I_mode, n, m, seed.child(0, 2))
    block = draw_block(seed.child(0), n, I, signed=True, toeplitz=toeplitz)
    return BinaryEmbedder(
        "SignedCirculant", n, blocks=(block,),
        recipe=_recipe("SignedCirculant", seed, n=n, m=len(I), I_mode=_mode_param(I_mode),
                       toeplitz=toeplitz),
    )


def build_median_fast_embedder(seed, n: int, nprime: int, B: int, mprime: int,
                               variant: str, s: int | None = None,
                               toeplitz: bool = False) -> BinaryEmbedder:
    seed = as_seed(seed)
    if B < 1:
        raise ValueError("need at least one block")
    if not 1 <= mprime <= nprime:
        raise ValueError(f"need 1 <= m' <= n', got m'={mprime}, n'={nprime}")
    if variant == "FJLT" and nprime > next_power_of_two(n):
        raise ValueError("FJLT output dimension exceeds the padded input dimension")
    phi = _build_preconditioner(seed.child(0), n, variant, nprime, s)
    blocks = tuple(
        draw_block(seed.child(1 + b), nprime,
                   uniform_subset(seed.child(1 + b, 2), nprime, mprime),
                   signed=True, toeplitz=toeplitz)
        for b in range(B)
    )
    return BinaryEmbedder(
        "MedianFast", n, preconditioner=phi, blocks=blocks,
        recipe=_recipe("MedianFast", seed, n=n, nprime=nprime, B=B, mprime=mprime,
                       variant=variant, s=s, toeplitz=toeplitz),
    )


_BUILDERS = {
    "DenseGaussian": build_dense_embedder,
    "AcceleratedGaussian": build_accelerated_embedder,
    "SubsampledCirculant": build_subsampled_circulant_embedder,
    "SignedCirculant": build_signed_circulant_embedder,
    "MedianFast": build_median_fast_embedder,
}


def from_recipe(recipe) -> BinaryEmbedder:
    if isinstance(recipe, str):
        recipe = json.loads(recipe)
    kind = recipe["kind"]
    if kind not in _BUILDERS:
        raise ValueError(f"unknown embedder kind {kind!r}")
    return _BUILDERS[kind](SeedSpec.from_dict(recipe["seed"]), **recipe["params"])


def embed(e: BinaryEmbedder, x, backend: str = "builtin") -> BitCode:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("embed takes a single vector; use embed_many for batches")
    return BitCode(sign_map(e.project(x, backend)), e.num_blocks)


def embed_many(e: BinaryEmbedder, X, backend: str = "builtin") -> np.ndarray:
    """Sign codes for each row of X, as an int8 array of shape (N, m)."""
    return sign_map(e.project(np.atleast_2d(X), backend))


def code_distance(e: BinaryEmbedder, a: BitCode, b: BitCode) -> float:
    if e.output_distance == "median_block":
        return metrics.median_block(a, b, e.num_blocks)
    return metrics.hamming(a, b)
