"""Points, lines and PGL(3) elements of the projective plane over a FieldCtx.

Every object stores element codes in canonical form: the first nonzero
coordinate (row-major entry for matrices) is 1. Equality, hashing and the
deterministic ordering all work on those canonical tuples.
"""

from collections import deque
from itertools import product

import numpy as np

from . import _config
from .field import ContextMismatch, FieldElem, embedding


class GroupTooLarge(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"group closure exceeded the cap of {cap} elements")
        self.cap = cap


def _normalize(ctx, vals):
    for x in vals:
        if x:
            if x == 1:
                return tuple(vals)
            inv = ctx.inv(x)
            return tuple(ctx.mul(v, inv) for v in vals)
    raise ValueError("all coordinates are zero")


def _codes(ctx, vals):
    out = []
    for v in vals:
        if isinstance(v, FieldElem):
            if v.ctx is not ctx:
                raise ContextMismatch(f"coordinate in {v.ctx}, expected {ctx}")
            out.append(v.v)
        else:
            v = int(v)
            if not 0 <= v < ctx.q:
                raise ValueError(f"code {v} out of range for {ctx}")
            out.append(v)
    return out


def _dot(ctx, a, b):
    add, mul = ctx.add, ctx.mul
    return add(add(mul(a[0], b[0]), mul(a[1], b[1])), mul(a[2], b[2]))


def _cross(ctx, a, b):
    mul, sub = ctx.mul, ctx.sub
    return (sub(mul(a[1], b[2]), mul(a[2], b[1])),
            sub(mul(a[2], b[0]), mul(a[0], b[2])),
            sub(mul(a[0], b[1]), mul(a[1], b[0])))


class _Triple:
    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        coords = _codes(ctx, coords)
        if len(coords) != 3:
            raise ValueError("expected three coordinates")
        self.ctx = ctx
        self.coords = _normalize(ctx, coords)

    @classmethod
    def _raw(cls, ctx, coords):
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.coords = coords
        return obj

    @property
    def elems(self):
        return tuple(FieldElem(self.ctx, v) for v in self.coords)

    def over(self, dst):
        if dst is self.ctx:
            return self
        emb = embedding(self.ctx, dst)
        return self._raw(dst, tuple(emb(v) for v in self.coords))

    def __eq__(self, other):
        return (type(other) is type(self) and other.ctx.key == self.ctx.key
                and other.coords == self.coords)

    def __hash__(self):
        return hash((type(self).__name__, self.ctx.key, self.coords))

    def __lt__(self, other):
        return self.coords < other.coords

    def _fmt(self):
        if self.ctx.n == 1:
            return ":".join(str(c) for c in self.coords)
        return ":".join(str(self.ctx.to_coeffs(c)) if c > 1 else str(c) for c in self.coords)


class ProjPoint(_Triple):
    """A point (X:Y:Z)."""

    __slots__ = ()

    def __repr__(self):
        return f"({self._fmt()})"


class ProjLine(_Triple):
    """A line aX + bY + cZ = 0 stored by its dual coordinates [a:b:c]."""

    __slots__ = ()

    def contains(self, P):
        if P.ctx is not self.ctx:
            raise ContextMismatch(f"line over {self.ctx}, point over {P.ctx}")
        return _dot(self.ctx, self.coords, P.coords) == 0

    def __repr__(self):
        return f"[{self._fmt()}]"


def incident(P, L):
    return L.contains(P)


def line_through(P, Q):
    """The line through two distinct points (cross product)."""
    if P.ctx is not Q.ctx:
        raise ContextMismatch(f"points over {P.ctx} and {Q.ctx}")
    if P == Q:
        raise ValueError(f"line_through needs distinct points, got {P} twice")
    return ProjLine(P.ctx, _cross(P.ctx, P.coords, Q.coords))


def meet(L, M):
    """Intersection point of two distinct lines."""
    if L.ctx is not M.ctx:
        raise ContextMismatch(f"lines over {L.ctx} and {M.ctx}")
    if L == M:
        raise ValueError("meet needs distinct lines")
    return ProjPoint(L.ctx, _cross(L.ctx, L.coords, M.coords))


def collinear(P, Q, R):
    ctx = P.ctx
    return _dot(ctx, _cross(ctx, P.coords, Q.coords), R.coords) == 0


def points_on_line(L):
    """All points of P^2(ctx) on L, sorted."""
    ctx = L.ctx
    # two independent vectors of the kernel of (a, b, c), from cross products with e_i
    span = []
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        v = _cross(ctx, L.coords, e)
        if any(v) and not (span and not any(_cross(ctx, span[0], v))):
            span.append(v)
        if len(span) == 2:
            break
    A, B = span
    out = {_normalize(ctx, B)}
    for t in range(ctx.q):
        out.add(_normalize(ctx, tuple(ctx.add(x, ctx.mul(t, y)) for x, y in zip(A, B))))
    return [ProjPoint._raw(ctx, v) for v in sorted(out)]


def _plane_points(ctx):
    q = ctx.q
    yield (0, 0, 1)
    for z in range(q):
        yield (0, 1, z)
    for y in range(q):
        for z in range(q):
            yield (1, y, z)


def plane_points(ctx):
    """All q^2 + q + 1 points of P^2(ctx) in canonical order."""
    if ctx.q > _config.SCAN_CAP:
        from .field import CapExceeded

        raise CapExceeded(f"{ctx} exceeds the scan cap {_config.SCAN_CAP}")
    return [ProjPoint._raw(ctx, t) for t in _plane_points(ctx)]


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------

def _matmul(ctx, A, B):
    add, mul = ctx.add, ctx.mul
    out = []
    for i in range(0, 9, 3):
        a0, a1, a2 = A[i], A[i + 1], A[i + 2]
        for j in range(3):
            out.append(add(add(mul(a0, B[j]), mul(a1, B[3 + j])), mul(a2, B[6 + j])))
    return out


def _matvec(ctx, A, v):
    add, mul = ctx.add, ctx.mul
    return tuple(add(add(mul(A[i], v[0]), mul(A[i + 1], v[1])), mul(A[i + 2], v[2]))
                 for i in range(0, 9, 3))


def _adjugate(ctx, m):
    a, b, c, d, e, f, g, h, i = m
    mul, sub = ctx.mul, ctx.sub
    return [sub(mul(e, i), mul(f, h)), sub(mul(c, h), mul(b, i)), sub(mul(b, f), mul(c, e)),
            sub(mul(f, g), mul(d, i)), sub(mul(a, i), mul(c, g)), sub(mul(c, d), mul(a, f)),
            sub(mul(d, h), mul(e, g)), sub(mul(b, g), mul(a, h)), sub(mul(a, e), mul(b, d))]


def _det(ctx, m):
    adj = _adjugate(ctx, m)
    add, mul = ctx.add, ctx.mul
    return add(add(mul(m[0], adj[0]), mul(m[1], adj[3])), mul(m[2], adj[6]))


class ProjMatrix:
    """An element of PGL(3) over ctx, stored row-major and normalized."""

    __slots__ = ("ctx", "entries", "_inv")

    def __init__(self, ctx, entries):
        flat = []
        for e in entries:
            if isinstance(e, (list, tuple)):
                flat.extend(e)
            else:
                flat.append(e)
        flat = _codes(ctx, flat)
        if len(flat) != 9:
            raise ValueError("a 3x3 matrix needs nine entries")
        if _det(ctx, flat) == 0:
            raise ValueError("singular matrix")
        self.ctx = ctx
        self.entries = _normalize(ctx, flat)
        self._inv = None

    @classmethod
    def _raw(cls, ctx, entries):
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.entries = _normalize(ctx, entries)
        obj._inv = None
        return obj

    @classmethod
    def identity(cls, ctx):
        return cls._raw(ctx, (1, 0, 0, 0, 1, 0, 0, 0, 1))

    @classmethod
    def diag(cls, ctx, a, b, c):
        return cls(ctx, _codes(ctx, [a, 0, 0, 0, b, 0, 0, 0, c]))

    @property
    def rows(self):
        e = self.entries
        return (e[0:3], e[3:6], e[6:9])

    def inverse(self):
        if self._inv is None:
            inv = ProjMatrix._raw(self.ctx, _adjugate(self.ctx, self.entries))
            inv._inv = self
            self._inv = inv
        return self._inv

    def __matmul__(self, other):
        if isinstance(other, ProjMatrix):
            if other.ctx is not self.ctx:
                raise ContextMismatch(f"matrices over {self.ctx} and {other.ctx}")
            return ProjMatrix._raw(self.ctx, _matmul(self.ctx, self.entries, other.entries))
        return NotImplemented

    def __call__(self, obj):
        return apply(self, obj)

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = ProjMatrix.identity(self.ctx)
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def is_identity(self):
        return self.entries == (1, 0, 0, 0, 1, 0, 0, 0, 1)

    def order(self, bound=None):
        bound = bound or self.ctx.q ** 3
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = cur @ self
        raise RuntimeError(f"order exceeds {bound}")

    def transpose_raw(self):
        e = self.entries
        return (e[0], e[3], e[6], e[1], e[4], e[7], e[2], e[5], e[8])

    def over(self, dst):
        if dst is self.ctx:
            return self
        emb = embedding(self.ctx, dst)
        m = object.__new__(ProjMatrix)
        m.ctx = dst
        m.entries = tuple(emb(v) for v in self.entries)
        m._inv = None
        return m

    def conjugate(self, by):
        """by @ self @ by^-1."""
        return by @ self @ by.inverse()

    def __eq__(self, other):
        return (isinstance(other, ProjMatrix) and other.ctx.key == self.ctx.key
                and other.entries == self.entries)

    def __hash__(self):
        return hash(("M", self.ctx.key, self.entries))

    def __lt__(self, other):
        return self.entries < other.entries

    def __repr__(self):
        return "ProjMatrix(" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + ")"


def apply(M, obj):
    """Image of a point, line or divisor-free object under M.

    Points map by M v; lines map to their image lines, i.e. by M^-T.
    """
    if obj.ctx is not M.ctx:
        raise ContextMismatch(f"matrix over {M.ctx}, object over {obj.ctx}")
    if isinstance(obj, ProjPoint):
        return ProjPoint._raw(M.ctx, _normalize(M.ctx, _matvec(M.ctx, M.entries, obj.coords)))
    if isinstance(obj, ProjLine):
        inv_t = M.inverse().transpose_raw()
        return ProjLine._raw(M.ctx, _normalize(M.ctx, _matvec(M.ctx, inv_t, obj.coords)))
    raise TypeError(f"cannot apply a matrix to {type(obj).__name__}")


# --------------------------------------------------------------------------
# groups
# --------------------------------------------------------------------------

class AutGroup:
    """A finite subgroup of PGL(3), elements in canonical (lexicographic) order."""

    def __init__(self, elements, generators=()):
        self.elements = tuple(sorted(set(elements)))
        if not self.elements:
            raise ValueError("a group has at least the identity")
        self.ctx = self.elements[0].ctx
        self.generators = tuple(generators)
        self._set = frozenset(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, M):
        return M in self._set

    def intersection(self, other):
        return sorted(self._set & other._set)

    def is_closed(self):
        return all((a @ b) in self._set for a in self.elements for b in self.elements)

    def conjugate(self, by):
        return AutGroup([g.conjugate(by) for g in self.elements],
                        [g.conjugate(by) for g in self.generators])

    def over(self, dst):
        if dst is self.ctx:
            return self
        return AutGroup([g.over(dst) for g in self.elements], [g.over(dst) for g in self.generators])

    def is_cyclic(self):
        n = self.order
        return any(g.order(n) == n for g in self.elements)

    def __repr__(self):
        return f"AutGroup(order={self.order}, over {self.ctx})"


def group_closure(gens, cap=None):
    """Breadth-first closure of ``gens`` under multiplication."""
    cap = _config.GROUP_CAP if cap is None else cap
    gens = list(gens)
    if not gens:
        raise ValueError("group_closure needs at least one generator")
    ctx = gens[0].ctx
    for g in gens:
        if g.ctx is not ctx:
            raise ContextMismatch("generators over different fields")
    ident = ProjMatrix.identity(ctx)
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g @ s
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise GroupTooLarge(cap)
                queue.append(h)
    return AutGroup(seen, gens)


def orbit(G, P):
    """Sorted orbit {g(P) : g in G}."""
    return sorted({apply(g, P) for g in G})


def orbit_under_generators(gens, P, cap=None):
    """Orbit of P under the group generated by ``gens`` without building the group."""
    cap = _config.GROUP_CAP if cap is None else cap
    seen = {P}
    queue = deque([P])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = apply(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupTooLarge(cap)
                queue.append(y)
    return sorted(seen)


# --------------------------------------------------------------------------
# perspectivities
# --------------------------------------------------------------------------

def _perspectivity_entries(ctx, v, w):
    add, mul = ctx.add, ctx.mul
    return [add(1 if i == j else 0, mul(v[i], w[j])) for i in range(3) for j in range(3)]


def perspectivities_with_center(P, ctx=None):
    """Lazily yield every projective transformation fixing P and each line through P.

    These are the classes of I + v w^T (v a representative of P) with
    1 + w.v != 0; w runs over ctx^3 in lexicographic order and w = 0 gives
    the identity.
    """
    ctx = ctx or P.ctx
    P = P.over(ctx)
    v = P.coords
    for w in product(range(ctx.q), repeat=3):
        if ctx.add(1, _dot(ctx, v, w)) == 0:
            continue
        yield ProjMatrix._raw(ctx, _perspectivity_entries(ctx, v, w))


def perspectivity_array(P, ctx=None):
    """All perspectivities with center P as an int array (K, 3, 3), unnormalized.

    Row k corresponds to the k-th nonsingular w in lexicographic order.
    """
    ctx = ctx or P.ctx
    P = P.over(ctx)
    if ctx.q ** 3 > 4 * _config.SCAN_CAP:
        from .field import CapExceeded

        raise CapExceeded(f"perspectivity family over {ctx} too large to materialize")
    kt = ctx.kt
    q = ctx.q
    w = np.array(list(product(range(q), repeat=3)), dtype=np.int64).reshape(-1, 3)
    v = np.array(P.coords, dtype=np.int64)
    from .kernels import _np_add, _np_mul

    outer = _np_mul(v[None, :, None], w[:, None, :], kt)  # (K, 3, 3): v_i w_j
    eye = np.eye(3, dtype=np.int64)[None, :, :]
    mats = _np_add(outer, np.broadcast_to(eye, outer.shape), kt)
    # det = 1 + w.v (up to the c^2 factor, c = 1)
    wv = _np_add(_np_add(_np_mul(w[:, 0], v[0], kt), _np_mul(w[:, 1], v[1], kt), kt),
                 _np_mul(w[:, 2], v[2], kt), kt)
    keep = _np_add(wv, np.ones_like(wv), kt) != 0
    return mats[keep]
