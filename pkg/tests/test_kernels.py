"""Vectorized kernels: numba and numpy backends agree with each other and with scalar arithmetic."""

import contextlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from galoispts import kernels
from galoispts.field import make_field
from galoispts.linalg import rref

FIELDS = [(2, 2), (2, 4), (3, 2), (13, 1), (5, 3), (2, 8), (3, 5)]
BACKENDS = ["numpy"] + (["numba"] if kernels.numba is not None else [])


@contextlib.contextmanager
def backend(name):
    prev = kernels.set_backend(name)
    try:
        yield
    finally:
        kernels.set_backend(prev)


def _scalar_eval(F, exps, coefs, pt):
    acc = 0
    for e, c in zip(exps, coefs):
        t = c
        for x, k in zip(pt, e):
            t = F.mul(t, F.pow(x, int(k)))
        acc = F.add(acc, t)
    return acc


def _random_poly(rng, F, d, terms):
    exps = []
    for _ in range(terms):
        i = int(rng.integers(0, d + 1))
        j = int(rng.integers(0, d - i + 1))
        exps.append((i, j, d - i - j))
    coefs = rng.integers(0, F.q, size=terms)
    return np.array(exps, dtype=np.int64), coefs.astype(np.int64)


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("pn", FIELDS)
def test_eval_poly_matches_scalar(name, pn):
    F = make_field(*pn)
    rng = np.random.default_rng(sum(pn))
    exps, coefs = _random_poly(rng, F, 5, 8)
    pts = rng.integers(0, F.q, size=(300, 3))
    with backend(name):
        got = kernels.eval_poly(F.kt, exps, coefs, pts)
    want = [_scalar_eval(F, exps, coefs, tuple(int(x) for x in p)) for p in pts]
    assert got.tolist() == want


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("pn", FIELDS)
def test_apply_mats_matches_scalar(name, pn):
    F = make_field(*pn)
    rng = np.random.default_rng(7 + sum(pn))
    mats = rng.integers(0, F.q, size=(20, 3, 3))
    pts = rng.integers(0, F.q, size=(15, 3))
    with backend(name):
        got = kernels.apply_mats(F.kt, mats, pts)
    for k in range(20):
        for n in range(15):
            for i in range(3):
                acc = 0
                for j in range(3):
                    acc = F.add(acc, F.mul(int(mats[k, i, j]), int(pts[n, j])))
                assert got[k, n, i] == acc


@given(st.sampled_from(FIELDS), st.integers(0, 2**32 - 1))
def test_backends_agree_on_row_reduce(pn, seed):
    F = make_field(*pn)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, F.q, size=(int(rng.integers(1, 7)), int(rng.integers(1, 8))))
    if rng.random() < 0.5:
        A[-1] = A[0]
    results = []
    for name in BACKENDS:
        with backend(name):
            R, piv = kernels.row_reduce(F.kt, A)
        results.append((R.tolist(), piv.tolist()))
    assert all(r == results[0] for r in results)
    want, pivots = rref(F, A.tolist())
    assert results[0][1] == list(pivots)
    assert results[0][0][:len(pivots)] == [list(r) for r in want[:len(pivots)]]


@pytest.mark.parametrize("pn", [(2, 2), (3, 2), (13, 1), (2, 4)])
def test_backends_agree_on_chart_and_maps_onto(pn):
    F = make_field(*pn)
    rng = np.random.default_rng(3)
    exps, coefs = _random_poly(rng, F, 4, 6)
    mats = rng.integers(0, F.q, size=(40, 3, 3))
    mats[0] = np.eye(3, dtype=np.int64)
    charts, masks = [], []
    for name in BACKENDS:
        with backend(name):
            chart = kernels.chart_zeros(F.kt, exps, coefs, F.q)
            zeros = np.array([(1, y, z) for y in range(F.q) for z in range(F.q)
                              if chart[y * F.q + z]], dtype=np.int64).reshape(-1, 3)
            charts.append(chart.tolist())
            masks.append(kernels.maps_onto(F.kt, mats, zeros, exps, coefs).tolist())
    assert all(c == charts[0] for c in charts)
    assert all(m == masks[0] for m in masks)
    assert masks[0][0]
    for y in range(F.q):
        for z in range(F.q):
            assert charts[0][y * F.q + z] == (_scalar_eval(F, exps, coefs, (1, y, z)) == 0)


def test_backend_flag_round_trip():
    prev = kernels.backend()
    assert prev in ("numba", "numpy")
    with backend("numpy"):
        assert kernels.backend() == "numpy"
    assert kernels.backend() == prev
    with pytest.raises(ValueError):
        kernels.set_backend("cuda")


def test_env_flag_selects_numpy():
    import subprocess
    import sys

    code = "from galoispts import kernels; print(kernels.backend())"
    env = {**__import__("os").environ, "GALOISPTS_JIT": "0"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
