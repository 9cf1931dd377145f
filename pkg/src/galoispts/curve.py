"""Plane curves given by homogeneous trivariate polynomials."""

import random
from functools import cached_property

import numpy as np

from . import _config, kernels
from . import poly as upoly
from .field import CapExceeded, ContextMismatch, FieldElem, embedding, extension, make_field
from .linalg import nullspace
from .projective import ProjLine, ProjPoint, _normalize


class CurveError(ValueError):
    pass


class NoCurve(CurveError):
    """No nonzero form of the requested degree vanishes on the points."""

    def __init__(self, degree, npoints):
        super().__init__(f"no curve of degree {degree} passes through the {npoints} points")
        self.degree = degree


class Underdetermined:
    """Interpolation result when the solution space has dimension > 1."""

    def __init__(self, degree, dim, basis):
        self.degree = degree
        self.dim = dim
        self.basis = basis

    def __bool__(self):
        return False

    def __repr__(self):
        return f"Underdetermined(degree={self.degree}, dim={self.dim})"


class LineComponent(CurveError):
    def __init__(self, line):
        super().__init__(f"line {line} is a component of the curve")
        self.line = line


def monomials(d):
    """Exponent triples of degree d in descending lex order (X^d first)."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


# --------------------------------------------------------------------------
# sparse trivariate polynomials: dict {(i, j, k): code}
# --------------------------------------------------------------------------

def _pmul(ctx, a, b):
    out = {}
    add, mul = ctx.add, ctx.mul
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            v = add(out.get(e, 0), mul(ca, cb))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _padd_scaled(ctx, acc, b, c):
    add, mul = ctx.add, ctx.mul
    for e, v in b.items():
        w = add(acc.get(e, 0), mul(v, c))
        if w:
            acc[e] = w
        else:
            acc.pop(e, None)


def _lin_powers(ctx, row, d):
    lin = {e: c for e, c in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), row) if c}
    pw = [{(0, 0, 0): 1}]
    for _ in range(d):
        pw.append(_pmul(ctx, pw[-1], lin))
    return pw


def substitute(ctx, coeffs, d, rows):
    """F(M v) as a coefficient dict, M given by its rows."""
    pw = [_lin_powers(ctx, r, d) for r in rows]
    out = {}
    cache = {}
    for (i, j, k), c in coeffs.items():
        key = (i, j)
        if key not in cache:
            cache[key] = _pmul(ctx, pw[0][i], pw[1][j])
        _padd_scaled(ctx, out, _pmul(ctx, cache[key], pw[2][k]), c)
    return out


def _upowers(ctx, a, b, d):
    lin = upoly.trim([a, b])
    pw = [[1]]
    for _ in range(d):
        pw.append(upoly.mul(ctx, pw[-1], lin))
    return pw


class PlaneCurve:
    """The curve F = 0 for a nonzero homogeneous F over ``ctx``.

    ``coeffs`` maps exponent triples to element codes. The stored polynomial is
    scaled so its first nonzero coefficient (descending lex order) is 1.
    With ``strict`` set, a curve that cannot be certified squarefree is
    rejected; otherwise ``squarefree`` records the outcome.
    """

    def __init__(self, ctx, coeffs, strict=True, label=None):
        clean = {}
        d = None
        for e, c in coeffs.items():
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0:
                raise CurveError(f"bad exponent {e}")
            c = _code(ctx, c)
            if not c:
                continue
            if d is None:
                d = sum(e)
            elif sum(e) != d:
                raise CurveError(f"polynomial is not homogeneous: degrees {d} and {sum(e)}")
            clean[e] = c
        if not clean:
            raise CurveError("zero polynomial")
        if d == 0:
            raise CurveError("constant polynomial defines no curve")
        self.ctx = ctx
        self.degree = d
        lead = next(clean[m] for m in monomials(d) if m in clean)
        inv = ctx.inv(lead)
        self.coeffs = {m: ctx.mul(clean[m], inv) for m in monomials(d) if m in clean}
        self.label = label
        if strict and not self.squarefree:
            raise CurveError(f"could not certify {self} squarefree")

    # -- basic data ----------------------------------------------------------

    @cached_property
    def exps(self):
        return np.array(list(self.coeffs), dtype=np.int64).reshape(-1, 3)

    @cached_property
    def coefs(self):
        return np.array(list(self.coeffs.values()), dtype=np.int64)

    def key(self):
        return (self.ctx.key, tuple(self.coeffs.items()))

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        name = self.label or self.format()
        return f"PlaneCurve({name} over {self.ctx})"

    def format(self):
        terms = []
        for (i, j, k), c in self.coeffs.items():
            mono = "".join(f"{v}^{e}" if e > 1 else v for v, e in zip("XYZ", (i, j, k)) if e)
            cs = "" if c == 1 else (str(c) if self.ctx.n == 1 else str(self.ctx.to_coeffs(c)))
            terms.append(f"{cs}{'*' if cs and mono else ''}{mono}")
        return " + ".join(terms)

    def over(self, ext):
        if ext is self.ctx:
            return self
        emb = embedding(self.ctx, ext)
        return PlaneCurve(ext, {e: emb(c) for e, c in self.coeffs.items()}, strict=False,
                          label=self.label)

    # -- evaluation ----------------------------------------------------------

    def _check(self, P):
        if P.ctx is not self.ctx:
            raise ContextMismatch(f"point over {P.ctx}, curve over {self.ctx}")

    def evaluate_codes(self, v):
        ctx = self.ctx
        acc = 0
        x, y, z = v
        for (i, j, k), c in self.coeffs.items():
            t = ctx.mul(c, ctx.mul(ctx.pow(x, i), ctx.mul(ctx.pow(y, j), ctx.pow(z, k))))
            acc = ctx.add(acc, t)
        return acc

    def evaluate(self, P):
        self._check(P)
        return self.evaluate_codes(P.coords)

    def evaluate_many(self, pts):
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, 3)
        if self.ctx.is_table:
            return kernels.eval_poly(self.ctx.kt, self.exps, self.coefs, pts)
        return np.array([self.evaluate_codes(tuple(int(c) for c in p)) for p in pts],
                        dtype=np.int64)

    def contains(self, P):
        return self.evaluate(P) == 0

    def partials(self):
        ctx = self.ctx
        out = []
        for axis in range(3):
            dct = {}
            for e, c in self.coeffs.items():
                if e[axis] % ctx.p:
                    ne = list(e)
                    ne[axis] -= 1
                    dct[tuple(ne)] = ctx.mul(c, e[axis] % ctx.p)
            out.append(dct)
        return out

    def gradient(self, P):
        self._check(P)
        ctx = self.ctx
        res = []
        for dct in self.partials():
            acc = 0
            for (i, j, k), c in dct.items():
                x, y, z = P.coords
                acc = ctx.add(acc, ctx.mul(c, ctx.mul(ctx.pow(x, i),
                                                      ctx.mul(ctx.pow(y, j), ctx.pow(z, k)))))
            res.append(acc)
        return tuple(res)

    def tangent_line(self, P):
        g = self.gradient(P)
        if not any(g):
            raise CurveError(f"{P} is a singular point")
        return ProjLine(self.ctx, g)

    # -- transformations -----------------------------------------------------

    def compose(self, M):
        """Coefficient dict of F(M v)."""
        if M.ctx is not self.ctx:
            raise ContextMismatch(f"matrix over {M.ctx}, curve over {self.ctx}")
        return substitute(self.ctx, self.coeffs, self.degree, M.rows)

    def image(self, M):
        """The curve M(C), i.e. F(M^-1 v) = 0."""
        return PlaneCurve(self.ctx, self.compose(M.inverse()), strict=False, label=None)

    def is_preserved_by(self, M):
        """Exact test F(M v) = lambda F(v) as polynomials."""
        G = self.compose(M)
        if set(G) != set(self.coeffs):
            return False
        lead = next(iter(self.coeffs))
        lam = G[lead]
        ctx = self.ctx
        return all(G[e] == ctx.mul(lam, c) for e, c in self.coeffs.items())

    # -- restriction to a line -----------------------------------------------

    def restrict(self, L, ext=None):
        """Restriction of F to L over ``ext``.

        Returns (A, B, f, m_inf): L is parametrized by A + t B, f(t) =
        F(A + t B) and m_inf = d - deg f is the multiplicity of B itself.
        Raises LineComponent when F vanishes on L.
        """
        ext = ext or self.ctx
        C = self.over(ext)
        L = L.over(ext) if L.ctx is not ext else L
        A, B = line_basis(L)
        pw = [_upowers(ext, a, b, C.degree) for a, b in zip(A, B)]
        f = []
        for (i, j, k), c in C.coeffs.items():
            term = upoly.mul(ext, upoly.mul(ext, pw[0][i], pw[1][j]), pw[2][k])
            f = upoly.add(ext, f, upoly.scale(ext, term, c))
        if not f:
            raise LineComponent(L)
        return (ProjPoint._raw(ext, A), ProjPoint._raw(ext, B), f, C.degree - upoly.degree(f))

    @cached_property
    def squarefree(self):
        return squarefree_certificate(self) is not None


def _code(ctx, c):
    if isinstance(c, FieldElem):
        if c.ctx is not ctx:
            raise ContextMismatch(f"coefficient over {c.ctx}, curve over {ctx}")
        return c.v
    if isinstance(c, (list, tuple)):
        return ctx.from_coeffs(c)
    c = int(c)
    if c < 0:
        return ctx.from_int(c)
    if c >= ctx.q:
        raise CurveError(f"coefficient code {c} out of range for {ctx}")
    return c


def line_basis(L):
    """Two canonical points spanning L (normalized coordinate tuples)."""
    ctx = L.ctx
    a, b, c = L.coords
    # L.coords is normalized, so its first nonzero entry is 1
    if a:
        A = _normalize(ctx, (ctx.neg(b), 1, 0))
        B = _normalize(ctx, (ctx.neg(c), 0, 1))
    elif b:
        A = (1, 0, 0)
        B = _normalize(ctx, (0, ctx.neg(c), 1))
    else:
        A = (1, 0, 0)
        B = (0, 1, 0)
    return A, B


def _squarefree_restriction(C, L, ext):
    try:
        _, _, f, m_inf = C.restrict(L, ext)
    except LineComponent:
        return False
    if m_inf > 1:
        return False
    if upoly.degree(f) == 0:
        return True
    return upoly.degree(upoly.gcd(ext, f, upoly.derivative(ext, f))) == 0


def squarefree_certificate(C, tries=64, max_ext=6):
    """A line whose restriction to C is a squarefree binary form of degree d.

    Such a line proves F has no repeated factor (a square factor would survive
    on every line). Lines are drawn deterministically over the base field and
    then over small extensions. Returns the line, or None if none was found.
    """
    rng = random.Random(0xC0FFEE)
    ctx = C.ctx
    fields = [ctx]
    for k in range(2, max_ext + 1):
        if ctx.q ** k > _config.TABLE_CAP:
            break
        fields.append(extension(ctx, k))
    for ext in fields:
        for _ in range(tries):
            coords = [rng.randrange(ext.q) for _ in range(3)]
            if not any(coords):
                continue
            L = ProjLine(ext, coords)
            if _squarefree_restriction(C, L, ext):
                return L
    return None


# --------------------------------------------------------------------------
# constructors and enumeration
# --------------------------------------------------------------------------

def hermitian_coeffs(ctx, q):
    return {(q, 0, 1): 1, (1, 0, q): 1, (0, q + 1, 0): ctx.neg(1)}


def make_curve(spec, ctx):
    """Build a curve from ``{"hermitian": q}``, ``{"fermat": d}`` or
    ``{"explicit": {(i, j, k): coefficient, ...}}`` (tuples ``("fermat", 3)``
    are accepted too)."""
    if isinstance(spec, (tuple, list)):
        spec = {spec[0]: spec[1]}
    if len(spec) != 1:
        raise CurveError(f"curve spec needs exactly one kind, got {sorted(spec)}")
    kind, arg = next(iter(spec.items()))
    if kind == "hermitian":
        q = int(arg)
        from .field import prime_power

        p, e = prime_power(q)
        if ctx.p != p or ctx.n % (2 * e):
            raise CurveError(f"hermitian q={q} needs a field containing GF({q}^2), got {ctx}")
        return PlaneCurve(ctx, hermitian_coeffs(ctx, q), label=f"hermitian q={q}")
    if kind == "fermat":
        d = int(arg)
        return PlaneCurve(ctx, {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}, label=f"fermat d={d}")
    if kind == "explicit":
        if isinstance(arg, dict):
            items = arg.items()
        else:
            items = ((tuple(e), c) for e, c in arg)
        return PlaneCurve(ctx, dict(items))
    raise CurveError(f"unknown curve kind {kind!r}")


def enumerate_points(C, ext=None):
    """All points of C over ``ext`` in canonical order."""
    ext = ext or C.ctx
    if ext.q > _config.SCAN_CAP:
        raise CapExceeded(f"{ext} exceeds the enumeration cap {_config.SCAN_CAP}")
    Ce = C.over(ext)
    q = ext.q
    head = np.zeros((q + 1, 3), dtype=np.int64)
    head[0] = (0, 0, 1)
    head[1:, 1] = 1
    head[1:, 2] = np.arange(q)
    hv = Ce.evaluate_many(head)
    out = [ProjPoint._raw(ext, tuple(int(c) for c in row)) for row, v in zip(head, hv) if v == 0]
    if ext.is_table:
        mask = kernels.chart_zeros(ext.kt, Ce.exps, Ce.coefs, q)
        idx = np.nonzero(mask)[0]
    else:
        idx = [y * q + z for y in range(q) for z in range(q)
               if Ce.evaluate_codes((1, y, z)) == 0]
    out.extend(ProjPoint._raw(ext, (1, int(i) // q, int(i) % q)) for i in idx)
    return out


def is_smooth_at(C, P):
    if not C.contains(P):
        raise CurveError(f"{P} is not on the curve")
    return any(C.gradient(P))


def monomial_matrix(ctx, exps, pts):
    """Rows: points; columns: monomials (values of x^i y^j z^k)."""
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 3)
    out = np.empty((pts.shape[0], len(exps)), dtype=np.int64)
    for c, e in enumerate(exps):
        if ctx.is_table:
            out[:, c] = kernels.eval_poly(ctx.kt, np.array([e]), np.array([1]), pts)
        else:
            out[:, c] = [ctx.mul(ctx.pow(int(x), e[0]), ctx.mul(ctx.pow(int(y), e[1]),
                                                                ctx.pow(int(z), e[2])))
                         for x, y, z in pts]
    return out


def interpolate_curve(points, degree, strict=False):
    """The unique degree-``degree`` curve through ``points``.

    Returns a PlaneCurve when the solution space is one-dimensional (its
    ``squarefree`` attribute flags repeated factors), an ``Underdetermined``
    when it is larger, and raises NoCurve when it is zero.
    """
    points = list(points)
    if not points:
        raise CurveError("interpolation needs points")
    ctx = points[0].ctx
    for P in points:
        if P.ctx is not ctx:
            raise ContextMismatch("interpolation points over different fields")
    exps = monomials(degree)
    A = monomial_matrix(ctx, exps, [P.coords for P in points])
    basis = nullspace(ctx, A.tolist(), len(exps))
    if not basis:
        raise NoCurve(degree, len(points))
    if len(basis) > 1:
        return Underdetermined(degree, len(basis), basis)
    return PlaneCurve(ctx, dict(zip(exps, basis[0])), strict=strict)


def descend(C, base):
    """C viewed over the subfield ``base``; raises if a coefficient is not in it."""
    if base is C.ctx:
        return C
    emb = embedding(base, C.ctx)
    coeffs = {}
    for e, c in C.coeffs.items():
        v = emb.preimage(c)
        if v is None:
            raise CurveError(f"coefficient of {e} does not lie in {base}")
        coeffs[e] = v
    return PlaneCurve(base, coeffs, strict=False, label=C.label)


def sample_points(C, ext, minimum, max_q=1 << 12):
    """At least ``minimum`` points of C, enlarging ``ext`` by degree-2 steps if needed.

    Growth stops once the field would exceed ``max_q``; the caller then gets
    whatever the largest field tried provided.
    """
    cur = ext
    while True:
        pts = enumerate_points(C, cur)
        if len(pts) >= minimum or cur.q ** 2 > min(max_q, _config.SCAN_CAP):
            return cur, pts
        cur = extension(cur, 2)


__all__ = [
    "CurveError", "LineComponent", "NoCurve", "PlaneCurve", "Underdetermined", "descend",
    "enumerate_points", "hermitian_coeffs", "interpolate_curve", "is_smooth_at", "line_basis",
    "make_curve", "make_field", "monomials", "sample_points", "squarefree_certificate",
]
