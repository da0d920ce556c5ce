"""Binary embeddings of the sphere via structured random matrices."""

from .codes import BitCode, sign_map
from .embeddings import (
    BinaryEmbedder,
    build_accelerated_embedder,
    build_dense_embedder,
    build_median_fast_embedder,
    build_signed_circulant_embedder,
    build_subsampled_circulant_embedder,
    code_distance,
    embed,
    embed_many,
    from_recipe,
)
from .metrics import geodesic, hamming, median_block
from .randomness import IndexSet, SeedSpec

__version__ = "0.1.0"
