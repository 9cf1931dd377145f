"""Vectorized finite-field kernels.

Field elements are int64 codes. Multiplication goes through log/exp tables;
addition is XOR in characteristic 2, modular addition in prime fields and
Zech-logarithm lookup otherwise. Every kernel has a numba implementation and a
pure-numpy implementation with identical results. The numba path is used when
numba imports and ``GALOISPTS_JIT`` is not ``0``; ``set_backend`` switches at
runtime (the benchmark uses it).
"""

from collections import namedtuple

import numpy as np

from . import _config

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

KernelTables = namedtuple("KernelTables", "mode p qm1 exp log zech")

MODE_CHAR2 = 0
MODE_PRIME = 1
MODE_ZECH = 2

_CHUNK = 1 << 16


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def _np_add(a, b, kt):
    if kt.mode == MODE_CHAR2:
        return a ^ b
    if kt.mode == MODE_PRIME:
        return (a + b) % kt.p
    la = kt.log[a]
    lb = kt.log[b]
    k = (lb - la) % kt.qm1
    z = kt.zech[k]
    live = (a != 0) & (b != 0) & (z >= 0)
    r = np.where(live, kt.exp[np.where(live, la + z, 0)], 0)
    r = np.where(a == 0, b, r)
    return np.where(b == 0, a, r)


def _np_mul(a, b, kt):
    live = (a != 0) & (b != 0)
    idx = np.where(live, kt.log[a] + kt.log[b], 0)
    return np.where(live, kt.exp[idx], 0)


def _np_neg(a, kt):
    if kt.mode == MODE_CHAR2:
        return a
    if kt.mode == MODE_PRIME:
        return (kt.p - a) % kt.p
    half = kt.qm1 // 2
    return np.where(a != 0, kt.exp[np.where(a != 0, kt.log[a] + half, 0)], 0)


def _np_reduce_add(vals, kt):
    """Field sum along the last axis."""
    if kt.mode == MODE_CHAR2:
        return np.bitwise_xor.reduce(vals, axis=-1)
    if kt.mode == MODE_PRIME:
        return vals.sum(axis=-1) % kt.p
    acc = vals[..., 0]
    for j in range(1, vals.shape[-1]):
        acc = _np_add(acc, vals[..., j], kt)
    return acc


def _np_eval_poly(kt, exps, clog, pts):
    out = np.empty(pts.shape[0], dtype=np.int64)
    if exps.shape[0] == 0:
        out[:] = 0
        return out
    positive = (exps > 0).astype(np.int64).T
    expT = exps.T
    for start in range(0, pts.shape[0], _CHUNK):
        block = pts[start:start + _CHUNK]
        logs = kt.log[block]
        t = clog[None, :] + logs @ expT
        dead = ((block == 0).astype(np.int64) @ positive) > 0
        vals = np.where(dead, 0, kt.exp[np.where(dead, 0, t % kt.qm1)])
        out[start:start + _CHUNK] = _np_reduce_add(vals, kt)
    return out


def _np_apply_mats(kt, mats, pts):
    K = mats.shape[0]
    N = pts.shape[0]
    out = np.empty((K, N, 3), dtype=np.int64)
    step = max(1, _CHUNK // max(1, N))
    for start in range(0, K, step):
        m = mats[start:start + step]
        terms = _np_mul(m[:, None, :, :], pts[None, :, None, :], kt)
        out[start:start + step] = _np_reduce_add(terms, kt)
    return out


def _np_maps_onto(kt, mats, pts, exps, clog):
    alive = np.arange(mats.shape[0])
    for n in range(pts.shape[0]):
        if alive.size == 0:
            break
        img = _np_apply_mats(kt, mats[alive], pts[n:n + 1])[:, 0, :]
        alive = alive[_np_eval_poly(kt, exps, clog, img) == 0]
    mask = np.zeros(mats.shape[0], dtype=np.bool_)
    mask[alive] = True
    return mask


def _np_row_reduce(kt, A):
    R, C = A.shape
    pivots = []
    r = 0
    for c in range(C):
        if r == R:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = kt.exp[kt.qm1 - kt.log[A[r, c]]]
        A[r] = _np_mul(A[r], np.int64(inv), kt)
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            factor = _np_neg(col[rows], kt)
            A[rows] = _np_add(A[rows], _np_mul(factor[:, None], A[r][None, :], kt), kt)
        pivots.append(c)
        r += 1
    return A, np.array(pivots, dtype=np.int64)


def _np_chart_zeros(kt, exps, clog, q):
    """Mask over (y, z) of the zeros of F(1, y, z); index y * q + z."""
    mask = np.empty(q * q, dtype=np.bool_)
    zs = np.arange(q, dtype=np.int64)
    rows = max(1, _CHUNK // q)
    for y0 in range(0, q, rows):
        ys = np.arange(y0, min(q, y0 + rows), dtype=np.int64)
        pts = np.empty((ys.size * q, 3), dtype=np.int64)
        pts[:, 0] = 1
        pts[:, 1] = np.repeat(ys, q)
        pts[:, 2] = np.tile(zs, ys.size)
        mask[y0 * q:(y0 + ys.size) * q] = _np_eval_poly(kt, exps, clog, pts) == 0
    return mask


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)

    # Field addition is written out inline in every inner loop below: calls
    # between jitted functions are not inlined and cost about ten times the
    # arithmetic itself. The pattern is
    #   mode 0: XOR;  mode 1: add and reduce mod p;  mode 2: Zech logarithms.

    @_jit
    def _nb_eval_one(x, y, z, exps, clog, mode, p, qm1, exp, log, zech):
        acc = 0
        lx = log[x]
        ly = log[y]
        lz = log[z]
        for m in range(exps.shape[0]):
            e0 = exps[m, 0]
            e1 = exps[m, 1]
            e2 = exps[m, 2]
            if (x == 0 and e0 > 0) or (y == 0 and e1 > 0) or (z == 0 and e2 > 0):
                continue
            t = clog[m]
            if e0 > 0:
                t += e0 * lx
            if e1 > 0:
                t += e1 * ly
            if e2 > 0:
                t += e2 * lz
            t = exp[t % qm1]
            if mode == 0:
                acc ^= t
            elif mode == 1:
                acc += t
                if acc >= p:
                    acc -= p
            elif acc == 0:
                acc = t
            else:
                la = log[acc]
                d = log[t] - la
                if d < 0:
                    d += qm1
                d = zech[d]
                acc = 0 if d < 0 else exp[la + d]
        return acc

    @_jit
    def _nb_eval_poly(exps, clog, pts, mode, p, qm1, exp, log, zech):
        n = pts.shape[0]
        out = np.empty(n, dtype=np.int64)
        for i in range(n):
            out[i] = _nb_eval_one(pts[i, 0], pts[i, 1], pts[i, 2], exps, clog,
                                  mode, p, qm1, exp, log, zech)
        return out

    @_jit
    def _nb_matvec(M, v, out, mode, p, qm1, exp, log, zech):
        for i in range(3):
            acc = 0
            for j in range(3):
                a = M[i, j]
                b = v[j]
                if a == 0 or b == 0:
                    continue
                t = exp[log[a] + log[b]]
                if mode == 0:
                    acc ^= t
                elif mode == 1:
                    acc += t
                    if acc >= p:
                        acc -= p
                elif acc == 0:
                    acc = t
                else:
                    la = log[acc]
                    d = log[t] - la
                    if d < 0:
                        d += qm1
                    d = zech[d]
                    acc = 0 if d < 0 else exp[la + d]
            out[i] = acc

    @_jit
    def _nb_apply_mats(mats, pts, mode, p, qm1, exp, log, zech):
        K = mats.shape[0]
        N = pts.shape[0]
        out = np.empty((K, N, 3), dtype=np.int64)
        for k in range(K):
            for n in range(N):
                _nb_matvec(mats[k], pts[n], out[k, n], mode, p, qm1, exp, log, zech)
        return out

    @_jit
    def _nb_maps_onto(mats, pts, exps, clog, mode, p, qm1, exp, log, zech):
        K = mats.shape[0]
        mask = np.ones(K, dtype=np.bool_)
        v = np.empty(3, dtype=np.int64)
        for k in range(K):
            for n in range(pts.shape[0]):
                _nb_matvec(mats[k], pts[n], v, mode, p, qm1, exp, log, zech)
                if _nb_eval_one(v[0], v[1], v[2], exps, clog, mode, p, qm1, exp, log, zech) != 0:
                    mask[k] = False
                    break
        return mask

    @_jit
    def _nb_row_reduce(A, mode, p, qm1, exp, log, zech):
        R, C = A.shape
        pivots = np.empty(min(R, C), dtype=np.int64)
        r = 0
        for c in range(C):
            if r == R:
                break
            i = r
            while i < R and A[i, c] == 0:
                i += 1
            if i == R:
                continue
            if i != r:
                for j in range(C):
                    tmp = A[r, j]
                    A[r, j] = A[i, j]
                    A[i, j] = tmp
            linv = qm1 - log[A[r, c]]
            for j in range(C):
                if A[r, j] != 0:
                    A[r, j] = exp[log[A[r, j]] + linv]
            for i in range(R):
                if i == r or A[i, c] == 0:
                    continue
                # row_i -= A[i, c] * row_r, as a multiply by -A[i, c]
                f = A[i, c]
                if mode == 1:
                    f = p - f
                elif mode == 2:
                    f = exp[log[f] + qm1 // 2]
                lf = log[f]
                for j in range(c, C):
                    b = A[r, j]
                    if b == 0:
                        continue
                    t = exp[lf + log[b]]
                    acc = A[i, j]
                    if mode == 0:
                        acc ^= t
                    elif mode == 1:
                        acc += t
                        if acc >= p:
                            acc -= p
                    elif acc == 0:
                        acc = t
                    else:
                        la = log[acc]
                        d = log[t] - la
                        if d < 0:
                            d += qm1
                        d = zech[d]
                        acc = 0 if d < 0 else exp[la + d]
                    A[i, j] = acc
            pivots[r] = c
            r += 1
        return A, pivots[:r].copy()

    @_jit
    def _nb_chart_zeros(exps, clog, q, mode, p, qm1, exp, log, zech):
        mask = np.zeros(q * q, dtype=np.bool_)
        for y in range(q):
            for z in range(q):
                if _nb_eval_one(1, y, z, exps, clog, mode, p, qm1, exp, log, zech) == 0:
                    mask[y * q + z] = True
        return mask


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

_backend = "numba" if (numba is not None and _config.JIT_REQUESTED) else "numpy"


def backend():
    return _backend


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def _coef_logs(kt, coefs):
    coefs = np.asarray(coefs, dtype=np.int64)
    return kt.log[coefs]


def _prep_poly(kt, exps, coefs):
    exps = np.ascontiguousarray(exps, dtype=np.int64).reshape(-1, 3)
    coefs = np.asarray(coefs, dtype=np.int64)
    keep = coefs != 0
    return np.ascontiguousarray(exps[keep]), np.ascontiguousarray(_coef_logs(kt, coefs[keep]))


def eval_poly(kt, exps, coefs, pts):
    """Evaluate sum(coefs[m] * x**e0 * y**e1 * z**e2) at each row of ``pts``."""
    exps, clog = _prep_poly(kt, exps, coefs)
    pts = np.ascontiguousarray(pts, dtype=np.int64).reshape(-1, 3)
    if _backend == "numba":
        return _nb_eval_poly(exps, clog, pts, *kt)
    return _np_eval_poly(kt, exps, clog, pts)


def apply_mats(kt, mats, pts):
    """Return out[k, n] = mats[k] @ pts[n] (unnormalized)."""
    mats = np.ascontiguousarray(mats, dtype=np.int64).reshape(-1, 3, 3)
    pts = np.ascontiguousarray(pts, dtype=np.int64).reshape(-1, 3)
    if _backend == "numba":
        return _nb_apply_mats(mats, pts, *kt)
    return _np_apply_mats(kt, mats, pts)


def maps_onto(kt, mats, pts, exps, coefs):
    """mask[k] is True iff F(mats[k] @ pts[n]) == 0 for every n (early exit per matrix)."""
    exps, clog = _prep_poly(kt, exps, coefs)
    mats = np.ascontiguousarray(mats, dtype=np.int64).reshape(-1, 3, 3)
    pts = np.ascontiguousarray(pts, dtype=np.int64).reshape(-1, 3)
    if _backend == "numba":
        return _nb_maps_onto(mats, pts, exps, clog, *kt)
    return _np_maps_onto(kt, mats, pts, exps, clog)


def row_reduce(kt, A):
    """Reduced row echelon form of a copy of ``A``; returns (rref, pivot columns)."""
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2 or A.size == 0:
        return A, np.zeros(0, dtype=np.int64)
    if _backend == "numba":
        return _nb_row_reduce(A, *kt)
    return _np_row_reduce(kt, A)


def chart_zeros(kt, exps, coefs, q):
    """Boolean mask of (y, z) in F_q x F_q with F(1, y, z) == 0 (index y * q + z)."""
    exps, clog = _prep_poly(kt, exps, coefs)
    if _backend == "numba":
        return _nb_chart_zeros(exps, clog, q, *kt)
    return _np_chart_zeros(kt, exps, clog, q)
