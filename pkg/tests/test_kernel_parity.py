"""Compiled and pure kernels must agree exactly, including on degenerate
inputs where the symbolic tie-break decides."""

import numpy as np
import pytest

from pdx import delaunay
from pdx._kernel import get_backend


def _run_both(pts):
    pts = np.asarray(pts, dtype=np.float64)
    order = delaunay._insertion_order(pts)
    out = {}
    for name in ("compiled", "pure"):
        impl = get_backend(name)
        out[name] = impl.triangulate(pts[:, 0].copy(), pts[:, 1].copy(), order)
    return out


CASES = {
    "random": np.random.default_rng(0).random((400, 2)),
    "grid": np.stack(np.meshgrid(np.arange(8.0), np.arange(8.0)), -1)
            .reshape(-1, 2),
    "two_lines": np.array(
        [[i, 0.0] for i in range(10)] + [[i, 1.0] for i in range(10)]
    ),
    "clustered": np.concatenate([
        np.random.default_rng(1).random((50, 2)) * 1e-6,
        np.random.default_rng(2).random((50, 2)) * 100,
    ]),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_backends_agree(name):
    res = _run_both(CASES[name])
    tc, hc, ec, ipc, ixc = res["compiled"]
    tp, hp, ep, ipp, ixp = res["pure"]
    assert np.array_equal(np.asarray(tc), np.asarray(tp))
    assert np.array_equal(np.asarray(hc), np.asarray(hp))
    assert np.array_equal(np.asarray(ec), np.asarray(ep))
    assert np.array_equal(np.asarray(ipc), np.asarray(ipp))
    assert np.array_equal(np.asarray(ixc), np.asarray(ixp))


def test_predicate_parity(rng):
    comp = get_backend("compiled")
    pure = get_backend("pure")
    for _ in range(500):
        vals = rng.random(8) * rng.choice([1.0, 1e-8, 1e8])
        assert comp.orient2d_sign(*vals[:6]) == pure.orient2d_sign(*vals[:6])
        assert comp.incircle_sign(*vals) == pure.incircle_sign(*vals)


def test_env_var_selects_pure(monkeypatch):
    import importlib

    import pdx._kernel as k

    monkeypatch.setenv("PDX_PURE_PYTHON", "1")
    importlib.reload(k)
    assert k.BACKEND == "pure"
    monkeypatch.delenv("PDX_PURE_PYTHON")
    importlib.reload(k)
    assert k.BACKEND == "compiled"
