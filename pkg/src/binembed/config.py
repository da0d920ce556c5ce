"""Experiment configuration and the parameter formulas with explicit constants.

The size conditions for the fast embeddings only hold up to unnamed absolute
constants. Each one is exposed here as a multiplier (default 1.0):

* ``c_bits``   m = c_bits d^-2 log(N/eta)      (m' = c_bits d^-2 for median blocks)
* ``c_dim``    n' (FJLT: d^-2 L (log^3(log L) log n + log(1/eta)); SJLT: d^-2 L;
               median kinds additionally n' >= d^-4 and n' >= m')
* ``c_sparse`` s = c_sparse d^-1 log(N/eta)
* ``c_blocks`` B = c_blocks log(N/eta)

with L = log(N/eta).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace

from . import embeddings as emb
from .fft import next_power_of_two
from .randomness import parse_seed

KIND_ALIASES = {
    "dense": "DenseGaussian",
    "accelerated": "AcceleratedGaussian",
    "subsampled": "SubsampledCirculant",
    "signed": "SignedCirculant",
    "median": "MedianFast",
}


@dataclass
class ExperimentConfig:
    kind: str = "dense"
    n: int | None = None
    m: int | None = None
    nprime: int | None = None
    B: int | None = None
    mprime: int | None = None
    s: int | None = None
    delta: float = 0.25
    eta: float = 0.1
    N: int | None = None
    trials: int = 1000
    seed: int = 0
    I_mode: str = "uniform"
    variant: str = "FJLT"
    toeplitz: bool = False
    c_bits: float = 1.0
    c_dim: float = 1.0
    c_sparse: float = 1.0
    c_blocks: float = 1.0
    normalize: bool = True
    format: str = "text"

    def merged(self, overrides: dict) -> "ExperimentConfig":
        return replace(self, **coerce(overrides))

    def as_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _coerce_value(key: str, value):
    kind = _TYPES[key]
    if value is None:
        return None
    if key == "seed":
        return parse_seed(value)
    if "bool" in kind:
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if "int" in kind:
        return int(value)
    if "float" in kind:
        return float(value)
    return str(value)


def coerce(d: dict) -> dict:
    out = {}
    for key, value in d.items():
        if key not in _TYPES:
            raise KeyError(f"unknown config key {key!r}")
        out[key] = _coerce_value(key, value)
    return out


def read_config_file(path) -> dict:
    """JSON object or flat ``key=value`` lines (``#`` starts a comment)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return coerce(json.loads(text))
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return coerce(out)


def log_term(N: int, eta: float) -> float:
    if N < 1 or not 0 < eta < 1:
        raise ValueError("need N >= 1 and 0 < eta < 1")
    return math.log(N / eta)


def fjlt_dim(n: int, delta: float, N: int, eta: float, c_dim: float) -> int:
    L = log_term(N, eta)
    loglog = max(math.log(L), 0.0) if L > 1 else 0.0
    raw = c_dim * delta ** -2 * L * (loglog ** 3 * math.log(n) + math.log(1 / eta))
    return min(next_power_of_two(n), max(1, math.ceil(raw)))


def sjlt_dims(delta: float, N: int, eta: float, c_dim: float, c_sparse: float) -> tuple[int, int]:
    L = log_term(N, eta)
    nprime = max(1, math.ceil(c_dim * delta ** -2 * L))
    s = min(nprime, max(1, math.ceil(c_sparse * L / delta)))
    return nprime, s


@dataclass(frozen=True)
class ResolvedParams:
    kind: str
    n: int
    m: int
    nprime: int | None = None
    B: int | None = None
    mprime: int | None = None
    s: int | None = None
    variant: str | None = None

    def describe(self) -> str:
        parts = [f"{k}={v}" for k, v in asdict(self).items() if v is not None]
        return " ".join(parts)


def resolve(cfg: ExperimentConfig, n: int, N: int) -> ResolvedParams:
    """Fill unset sizes from the formulas; explicitly set values win."""
    kind = KIND_ALIASES.get(cfg.kind, cfg.kind)
    d, eta = cfg.delta, cfg.eta
    L = log_term(N, eta)
    bits = max(1, math.ceil(cfg.c_bits * d ** -2 * L))
    if kind == "DenseGaussian":
        return ResolvedParams(kind, n, cfg.m or bits)
    if kind in ("SubsampledCirculant", "SignedCirculant"):
        return ResolvedParams(kind, n, cfg.m or min(bits, n))
    if kind == "AcceleratedGaussian":
        if cfg.variant == "FJLT":
            nprime, s = cfg.nprime or fjlt_dim(n, d, N, eta, cfg.c_dim), None
        else:
            nprime, s = sjlt_dims(d, N, eta, cfg.c_dim, cfg.c_sparse)
            nprime = cfg.nprime or nprime
            s = cfg.s or min(s, nprime)
        return ResolvedParams(kind, n, cfg.m or bits, nprime=nprime, s=s, variant=cfg.variant)
    if kind == "MedianFast":
        B = cfg.B or max(1, math.ceil(cfg.c_blocks * L))
        mprime = cfg.mprime or max(1, math.ceil(cfg.c_bits * d ** -2))
        floor_dim = max(mprime, math.ceil(cfg.c_dim * d ** -4))
        if cfg.variant == "FJLT":
            cap = next_power_of_two(n)
            nprime = cfg.nprime or min(cap, max(floor_dim, fjlt_dim(n, d, N, eta, cfg.c_dim)))
            mprime = min(mprime, nprime)
            s = None
        else:
            base, s = sjlt_dims(d, N, eta, cfg.c_dim, cfg.c_sparse)
            nprime = cfg.nprime or max(floor_dim, base)
            s = cfg.s or min(s, nprime)
        return ResolvedParams(kind, n, B * mprime, nprime=nprime, B=B, mprime=mprime,
                              s=s, variant=cfg.variant)
    raise ValueError(f"unknown embedder kind {cfg.kind!r}")


def build_embedder(params: ResolvedParams, seed, I_mode: str = "uniform", toeplitz: bool = False):
    if params.kind == "DenseGaussian":
        return emb.build_dense_embedder(seed, params.n, params.m)
    if params.kind == "AcceleratedGaussian":
        return emb.build_accelerated_embedder(seed, params.n, params.m, params.variant,
                                              params.nprime, params.s)
    if params.kind == "SubsampledCirculant":
        return emb.build_subsampled_circulant_embedder(seed, params.n, I_mode, params.m)
    if params.kind == "SignedCirculant":
        return emb.build_signed_circulant_embedder(seed, params.n, I_mode, params.m, toeplitz)
    return emb.build_median_fast_embedder(seed, params.n, params.nprime, params.B,
                                          params.mprime, params.variant, params.s, toeplitz)
