"""Exact Gaussian elimination over a FieldCtx."""

import numpy as np

from . import kernels
from .field import ContextMismatch, FieldElem


def rref(ctx, rows):
    """Reduced row echelon form of an int-coded matrix: (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return rows, []
    if ctx.is_table:
        A, piv = kernels.row_reduce(ctx.kt, np.asarray(rows, dtype=np.int64))
        return A.tolist(), [int(c) for c in piv]
    return _rref_scalar(ctx, rows)


def _rref_scalar(ctx, A):
    R, C = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(C):
        if r == R:
            break
        i = next((i for i in range(r, R) if A[i][c]), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        inv = ctx.inv(A[r][c])
        A[r] = [ctx.mul(x, inv) for x in A[r]]
        for i in range(R):
            if i != r and A[i][c]:
                f = ctx.neg(A[i][c])
                A[i] = [ctx.add(x, ctx.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(ctx, rows, ncols=None):
    """Basis of {v : rows @ v = 0}, one vector per free column (ascending)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    A, pivots = rref(ctx, rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = ctx.neg(A[r][free])
        basis.append(v)
    return basis


def solve(ctx, rows, rhs):
    """One solution of rows @ x = rhs, or None when the system is inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    A, pivots = rref(ctx, aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = A[r][ncols]
    return x


def _unwrap(m):
    ctx = None
    rows = []
    for row in m:
        out = []
        for e in row:
            if not isinstance(e, FieldElem):
                raise TypeError("matrix entries must be FieldElem")
            if ctx is None:
                ctx = e.ctx
            elif e.ctx is not ctx:
                raise ContextMismatch(f"matrix mixes {ctx} and {e.ctx}")
            out.append(e.v)
        rows.append(out)
    return ctx, rows


def solve_linear(m, mode="nullspace", rhs=None, ctx=None):
    """Gaussian elimination on a matrix of FieldElem.

    ``mode="nullspace"`` returns a list of basis vectors (reduced echelon
    form, free columns in ascending order). ``mode="solve"`` returns one
    solution of ``m x = rhs`` or ``None`` if the system is inconsistent.
    ``ctx`` is only needed when the matrix has no entries.
    """
    found, rows = _unwrap(m)
    ctx = found or ctx
    if ctx is None:
        raise ValueError("cannot infer the field of an empty matrix; pass ctx")
    wrap = lambda vec: [FieldElem(ctx, v) for v in vec]
    if mode == "nullspace":
        ncols = len(rows[0]) if rows else 0
        return [wrap(v) for v in nullspace(ctx, rows, ncols)]
    if mode == "solve":
        if rhs is None:
            raise ValueError("solve mode needs rhs")
        b = []
        for e in rhs:
            if not isinstance(e, FieldElem) or e.ctx is not ctx:
                raise ContextMismatch("rhs must be FieldElem of the matrix field")
            b.append(e.v)
        x = solve(ctx, rows, b)
        return None if x is None else wrap(x)
    raise ValueError(f"unknown mode {mode!r}")
