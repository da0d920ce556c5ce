import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from binembed import config as cfgmod
from binembed import jl, metrics
from binembed.randomness import SeedSpec
from binembed.suites import random_unit
from binembed.transforms import hadamard_matrix


def test_fjlt_full_is_orthogonal(rng):
    t = jl.build_fjlt(SeedSpec(1), 16, 16)
    x = rng.standard_normal(16)
    assert np.linalg.norm(jl.apply(t, x)) == pytest.approx(np.linalg.norm(x), abs=1e-9)
    np.testing.assert_allclose(t.dense() @ t.dense().T, np.eye(16), atol=1e-12)
    assert np.all(jl.apply(t, np.zeros(16)) == 0)


def test_fjlt_e1_is_signed_hadamard_column():
    t = jl.build_fjlt(SeedSpec(2), 8, 8)
    out = jl.apply(t, np.eye(8)[0])
    H = hadamard_matrix(8)
    np.testing.assert_allclose(out, t.eps[0] * H[:, 0], atol=1e-12)


def test_fjlt_bounds():
    with pytest.raises(ValueError):
        jl.build_fjlt(SeedSpec(0), 5, 9)
    t = jl.build_fjlt(SeedSpec(0), 5, 8)
    assert t.n_pad == 8 and t.scale == pytest.approx(1.0)


@pytest.mark.parametrize("variant", ["FJLT", "SJLT"])
def test_isometry_in_expectation(variant, rng):
    n, k = 24, 8
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    vals = []
    for s in range(2000):
        t = jl.build_fjlt(SeedSpec(s), n, k) if variant == "FJLT" else jl.build_sjlt(SeedSpec(s), n, k, 3)
        vals.append(np.sum(jl.apply(t, x) ** 2))
    vals = np.array(vals)
    assert abs(vals.mean() - 1.0) <= 3 * vals.std(ddof=1) / math.sqrt(len(vals))


def test_sjlt_single_column_full():
    t = jl.build_sjlt(SeedSpec(3), 1, 5, 5)
    assert np.sum(jl.apply(t, np.array([1.0])) ** 2) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        jl.build_sjlt(SeedSpec(3), 4, 2, 3)


def test_sjlt_matches_dense_and_column_sparsity(rng):
    t = jl.build_sjlt(SeedSpec(4), 16, 7, 3)
    X = rng.standard_normal((5, 16))
    np.testing.assert_allclose(jl.apply(t, X), X @ t.dense().T, atol=1e-12)
    assert np.all((t.dense() != 0).sum(axis=0) == 3)
    x = np.zeros(16)
    x[[2, 9]] = [1.5, -2.0]
    np.testing.assert_allclose(jl.apply(t, x), t.dense() @ x, atol=1e-12)


@pytest.mark.parametrize("variant", ["FJLT", "SJLT", "DenseGaussian"])
@given(seed=st.integers(0, 2**32), a=st.floats(-5, 5), b=st.floats(-5, 5))
def test_linearity(variant, seed, a, b):
    rng = np.random.default_rng(seed)
    n = 12
    t = {"FJLT": lambda: jl.build_fjlt(SeedSpec(seed), n, 5),
         "SJLT": lambda: jl.build_sjlt(SeedSpec(seed), n, 5, 2),
         "DenseGaussian": lambda: jl.build_dense_gaussian(SeedSpec(seed), n, 5)}[variant]()
    x, y = rng.standard_normal((2, n))
    lhs = jl.apply(t, a * x + b * y)
    rhs = a * jl.apply(t, x) + b * jl.apply(t, y)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * (1 + np.abs(rhs).max()))


def test_fjlt_matches_dense(rng):
    t = jl.build_fjlt(SeedSpec(5), 11, 6)
    X = rng.standard_normal((4, 11))
    np.testing.assert_allclose(jl.apply(t, X), X @ t.dense().T, atol=1e-12)


def test_dense_gaussian():
    n = 10_000
    t = jl.build_dense_gaussian(SeedSpec(6), n, 4)
    rows = np.sum(t.matrix ** 2, axis=1) / n
    assert np.all(np.abs(rows - 1) <= 4 / np.sqrt(n))
    assert np.all(jl.apply(t, np.zeros(n)) == 0)
    np.testing.assert_array_equal(t.matrix, jl.build_dense_gaussian(SeedSpec(6), n, 4).matrix)
    x = np.ones(n)
    np.testing.assert_allclose(jl.apply(t, x), t.matrix @ x)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        jl.apply(jl.build_sjlt(SeedSpec(0), 4, 2, 1), np.ones(5))


def test_check_isometry_trivial_and_duplicates(rng):
    D = random_unit(rng, 16, 6)
    t = jl.build_fjlt(SeedSpec(1), 16, 16)
    rep = jl.check_isometry(t, D, 1e-9)
    assert rep.passed and rep.max_norm_distortion < 1e-12
    rep2 = jl.check_isometry(t, np.vstack([D, D[:2]]), 1e-9)
    assert rep2.max_pair_distortion == pytest.approx(rep.max_pair_distortion, abs=1e-12)
    with pytest.raises(ValueError):
        jl.check_isometry(t, np.zeros((0, 16)), 0.1)


def test_sjlt_isometry_pass_rate_and_geodesic_transfer():
    """N=32, n=256, delta=0.2: SJLT sizes from the accelerated formula pass in >= 80% of seeds.

    c_dim = 2 was fitted on seeds 900..999 (c_dim = 1 passed 78 of them).
    """
    rng = np.random.default_rng(77)
    D = random_unit(rng, 256, 32)
    delta, N, eta = 0.2, 32, 0.1
    nprime, s = cfgmod.sjlt_dims(delta, N, eta, c_dim=2.0, c_sparse=1.0)
    passes = 0
    for k in range(100):
        t = jl.build_sjlt(SeedSpec(500 + k), 256, nprime, s)
        rep = jl.check_isometry(t, D, delta)
        if rep.passed:
            passes += 1
            assert jl.max_geodesic_shift(t, D) <= delta
    assert passes >= 80
