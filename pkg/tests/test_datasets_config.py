import json

import numpy as np
import pytest

from binembed import config as cfgmod
from binembed import datasets


def test_load_examples(tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("1,0,0\n0,1,0\n")
    ps = datasets.load_pointset(f)
    assert ps.points.shape == (2, 3) and ps.N == 2 and ps.n == 3
    f.write_text("3,4\n")
    np.testing.assert_allclose(datasets.load_pointset(f, normalize=True).points, [[0.6, 0.8]])
    f.write_text("1 2\t3\n4,5 6\n")
    assert datasets.load_pointset(f).points.tolist() == [[1, 2, 3], [4, 5, 6]]


def test_load_errors_name_the_line(tmp_path):
    f = tmp_path / "b.txt"
    f.write_text("0,0\n")
    with pytest.raises(datasets.DatasetError, match=":1:"):
        datasets.load_pointset(f, normalize=True)
    f.write_text("1,2\n3,4\n5\n")
    with pytest.raises(datasets.DatasetError, match=":3:"):
        datasets.load_pointset(f)
    f.write_text("1,2\n3,x\n")
    with pytest.raises(datasets.DatasetError, match=":2:"):
        datasets.load_pointset(f)
    f.write_text("\n")
    with pytest.raises(datasets.DatasetError):
        datasets.load_pointset(f)


def test_save_roundtrip(tmp_path):
    X = np.random.default_rng(0).standard_normal((3, 5))
    datasets.save_pointset(tmp_path / "c.txt", X)
    np.testing.assert_array_equal(datasets.load_pointset(tmp_path / "c.txt").points, X)


def test_config_file_formats(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text("# comment\nkind = median\nB=4\nseed=0x10\ntoeplitz=yes\n")
    d = cfgmod.read_config_file(f)
    assert d == {"kind": "median", "B": 4, "seed": 16, "toeplitz": True}
    f.write_text(json.dumps({"m": 12, "delta": 0.1}))
    assert cfgmod.read_config_file(f) == {"m": 12, "delta": 0.1}
    f.write_text("nonsense\n")
    with pytest.raises(ValueError, match=":1:"):
        cfgmod.read_config_file(f)
    f.write_text("bogus=1\n")
    with pytest.raises(KeyError):
        cfgmod.read_config_file(f)


def test_resolve_formulas():
    cfg = cfgmod.ExperimentConfig(kind="dense", delta=0.25, eta=0.1)
    p = cfgmod.resolve(cfg, 256, 24)
    L = np.log(240)
    assert p.m == int(np.ceil(16 * L))
    p = cfgmod.resolve(cfgmod.ExperimentConfig(kind="accelerated", variant="SJLT"), 256, 24)
    assert (p.nprime, p.s) == (int(np.ceil(16 * L)), int(np.ceil(4 * L)))
    p = cfgmod.resolve(cfgmod.ExperimentConfig(kind="median", variant="FJLT"), 256, 24)
    assert p.B == int(np.ceil(L)) and p.mprime == 16 and p.m == p.B * p.mprime
    assert p.nprime <= 256
    p = cfgmod.resolve(cfgmod.ExperimentConfig(kind="median", variant="SJLT"), 256, 24)
    assert p.nprime >= 256 and p.s <= p.nprime
    p = cfgmod.resolve(cfgmod.ExperimentConfig(kind="signed", m=7), 64, 2)
    assert p.m == 7
    with pytest.raises(ValueError):
        cfgmod.resolve(cfgmod.ExperimentConfig(kind="nope"), 8, 2)


def test_multipliers_scale_sizes():
    base = cfgmod.resolve(cfgmod.ExperimentConfig(kind="median", variant="SJLT"), 256, 24)
    big = cfgmod.resolve(cfgmod.ExperimentConfig(kind="median", variant="SJLT", c_bits=2,
                                                 c_blocks=2, c_dim=2, c_sparse=2), 256, 24)
    assert big.B > base.B and big.mprime > base.mprime and big.nprime > base.nprime


def test_build_embedder_every_kind():
    for kind in cfgmod.KIND_ALIASES:
        for variant in ("FJLT", "SJLT"):
            cfg = cfgmod.ExperimentConfig(kind=kind, variant=variant)
            p = cfgmod.resolve(cfg, 64, 10)
            e = cfgmod.build_embedder(p, 3)
            assert e.m == p.m
