import numpy as np
import pytest
from hypothesis import given, strategies as st

from binembed import embeddings as emb
from binembed import metrics
from binembed.codes import BitCode, sign_map
from binembed.randomness import IndexSet, SeedSpec


def builders(n):
    return {
        "DenseGaussian": lambda s: emb.build_dense_embedder(s, n, 9),
        "AcceleratedFJLT": lambda s: emb.build_accelerated_embedder(s, n, 7, "FJLT", min(8, n)),
        "AcceleratedSJLT": lambda s: emb.build_accelerated_embedder(s, n, 7, "SJLT", 6, 2),
        "SubsampledFirst": lambda s: emb.build_subsampled_circulant_embedder(s, n, "first_m", 5),
        "SubsampledUniform": lambda s: emb.build_subsampled_circulant_embedder(s, n, "uniform", 5),
        "SubsampledDyadic": lambda s: emb.build_subsampled_circulant_embedder(s, n, "dyadic", 3),
        "Signed": lambda s: emb.build_signed_circulant_embedder(s, n, "uniform", 6),
        "SignedToeplitz": lambda s: emb.build_signed_circulant_embedder(s, n, "first_m", 6, toeplitz=True),
        "MedianFJLT": lambda s: emb.build_median_fast_embedder(s, n, 8, 2, 4, "FJLT"),
        "MedianSJLT": lambda s: emb.build_median_fast_embedder(s, n, 10, 3, 4, "SJLT", 3),
        "MedianToeplitz": lambda s: emb.build_median_fast_embedder(s, n, 8, 2, 3, "FJLT", toeplitz=True),
    }


@pytest.mark.parametrize("name", list(builders(12)))
def test_fast_matches_dense_oracle(name):
    rng = np.random.default_rng(3)
    for n in (12, 32):
        build = builders(n)[name]
        for k in range(5):
            e = build(SeedSpec(k))
            X = rng.standard_normal((4, n))
            fast = emb.embed_many(e, X)
            oracle = sign_map(X @ e.dense().T)
            np.testing.assert_array_equal(fast, oracle)


@pytest.mark.parametrize("name", list(builders(12)))
def test_recipe_roundtrip_and_determinism(name):
    e = builders(16)[name](SeedSpec(5, 2, (1,)))
    e2 = emb.from_recipe(e.to_json())
    np.testing.assert_array_equal(e.dense(), e2.dense())
    x = np.random.default_rng(0).standard_normal(16)
    assert emb.embed(e, x) == emb.embed(e2, x)


@pytest.mark.parametrize("name", list(builders(12)))
@given(lam=st.floats(1e-3, 1e3), seed=st.integers(0, 2**32))
def test_scale_invariance(name, lam, seed):
    e = builders(12)[name](SeedSpec(seed))
    x = np.random.default_rng(seed).standard_normal(12)
    assert emb.embed(e, lam * x) == emb.embed(e, x)


def test_declared_distance_and_lengths():
    n = 16
    m = builders(n)
    assert m["MedianSJLT"](SeedSpec(0)).output_distance == "median_block"
    assert m["MedianSJLT"](SeedSpec(0)).m == 12
    assert m["Signed"](SeedSpec(0)).output_distance == "hamming"
    code = emb.embed(m["MedianSJLT"](SeedSpec(0)), np.ones(n))
    assert len(code) == 12 and code.blocks == 3


def test_p_equals_q_gives_zero_and_antipodal_gives_one(rng):
    for name, build in builders(16).items():
        e = build(SeedSpec(1))
        p = rng.standard_normal(16)
        assert emb.code_distance(e, emb.embed(e, p), emb.embed(e, p)) == 0
        if e.kind in ("DenseGaussian", "AcceleratedGaussian"):
            assert emb.code_distance(e, emb.embed(e, p), emb.embed(e, -p)) == 1


def test_median_single_block_is_hamming(rng):
    e = emb.build_median_fast_embedder(SeedSpec(2), 16, 16, 1, 8, "FJLT")
    p, q = rng.standard_normal((2, 16))
    a, b = emb.embed(e, p), emb.embed(e, q)
    assert emb.code_distance(e, a, b) == metrics.hamming(a, b)


def test_median_blocks_independent():
    e = emb.build_median_fast_embedder(SeedSpec(3), 32, 32, 3, 8, "FJLT")
    gens = [b.generator for b in e.blocks]
    assert not np.array_equal(gens[0], gens[1])
    assert all(len(b.index_set) == 8 for b in e.blocks)


def test_errors():
    with pytest.raises(ValueError):
        emb.build_signed_circulant_embedder(SeedSpec(0), 8, "uniform", 9)
    with pytest.raises(ValueError):
        emb.build_subsampled_circulant_embedder(SeedSpec(0), 8, "dyadic", 5)
    with pytest.raises(ValueError):
        emb.build_median_fast_embedder(SeedSpec(0), 8, 8, 0, 4, "FJLT")
    with pytest.raises(ValueError):
        emb.build_median_fast_embedder(SeedSpec(0), 8, 4, 2, 5, "FJLT")
    with pytest.raises(ValueError):
        emb.build_accelerated_embedder(SeedSpec(0), 8, 4, "SJLT", 4)
    with pytest.raises(ValueError):
        emb.build_accelerated_embedder(SeedSpec(0), 8, 4, "XJLT", 4)
    e = emb.build_dense_embedder(SeedSpec(0), 8, 4)
    with pytest.raises(ValueError):
        emb.embed(e, np.ones(9))


def test_explicit_index_set():
    e = emb.build_subsampled_circulant_embedder(SeedSpec(0), 8, IndexSet([2, 5, 7], 8), 3)
    assert e.blocks[0].index_set.indices.tolist() == [2, 5, 7]
    assert emb.from_recipe(e.to_dict()).blocks[0].index_set.indices.tolist() == [2, 5, 7]


def test_dense_embedder_matches_matrix_multiply(rng):
    e = emb.build_dense_embedder(SeedSpec(4), 16, 10)
    x = rng.standard_normal(16)
    assert emb.embed(e, x) == BitCode(sign_map(e.gaussian.matrix @ x))


def test_dense_unbiased_over_seeds():
    p, q = np.eye(6)[0], np.array([1.0, 1, 0, 0, 0, 0]) / np.sqrt(2)
    d = []
    for s in range(5000):
        e = emb.build_dense_embedder(SeedSpec(100, s), 6, 4)
        d.append(emb.code_distance(e, emb.embed(e, p), emb.embed(e, q)))
    d = np.array(d)
    assert abs(d.mean() - 0.25) <= 3 * d.std(ddof=1) / np.sqrt(len(d))


def test_dense_variance_formula_orthogonal_pair():
    from binembed import stats
    e = np.eye(20)
    est = stats.estimate_moments(lambda s: emb.build_dense_embedder(s, 20, 100), e[0], e[1], 4000, 8)
    assert abs(est.variance - 0.0025) <= 0.15 * 0.0025
