"""Divisors on plane curves, line pullbacks and functions built from linear forms."""

from collections import Counter
from math import lcm

import numpy as np

from . import poly as upoly
from .curve import CurveError, LineComponent
from .field import CapExceeded, ContextMismatch, FieldError, compositum, embedding, extension
from .projective import ProjLine, ProjMatrix, ProjPoint, _dot, _normalize, apply


class SplittingError(CurveError):
    """The line restriction does not split over the requested field."""

    def __init__(self, line, ext, factor_degrees, required_n):
        super().__init__(
            f"restriction to {line} does not split over {ext}: irreducible factor degrees "
            f"{factor_degrees}; smallest sufficient field is GF({ext.p}^{required_n})")
        self.line = line
        self.ext = ext
        self.factor_degrees = factor_degrees
        self.required_n = required_n


class Divisor:
    """A finite integer combination of points, all over one field ``ctx``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=()):
        self.ctx = ctx
        acc = Counter()
        items = terms.items() if isinstance(terms, dict) else terms
        for P, c in items:
            if P.ctx is not ctx:
                raise ContextMismatch(f"point {P} over {P.ctx}, divisor over {ctx}")
            acc[P] += int(c)
        self.terms = {P: c for P, c in sorted(acc.items()) if c}

    @classmethod
    def point(cls, P, mult=1):
        return cls(P.ctx, {P: mult})

    @property
    def degree(self):
        return sum(self.terms.values())

    @property
    def support(self):
        return list(self.terms)

    def is_zero(self):
        return not self.terms

    def positive(self):
        return Divisor(self.ctx, {P: c for P, c in self.terms.items() if c > 0})

    def negative(self):
        """The pole part as an effective divisor."""
        return Divisor(self.ctx, {P: -c for P, c in self.terms.items() if c < 0})

    def over(self, ext):
        if ext is self.ctx:
            return self
        return Divisor(ext, {P.over(ext): c for P, c in self.terms.items()})

    def _align(self, other):
        if other.ctx is self.ctx:
            return self, other
        C = compositum(self.ctx, other.ctx)
        return self.over(C), other.over(C)

    def __add__(self, other):
        a, b = self._align(other)
        return Divisor(a.ctx, list(a.terms.items()) + list(b.terms.items()))

    def __neg__(self):
        return Divisor(self.ctx, {P: -c for P, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return Divisor(self.ctx, {P: k * c for P, c in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    __hash__ = None

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for P, c in self.terms.items():
            parts.append(f"{'' if c == 1 else ('-' if c == -1 else c)}{P}")
        return " + ".join(parts).replace("+ -", "- ")


def pushforward(M, D):
    """Image of D under M (M over a subfield of D's field)."""
    if M.ctx is not D.ctx:
        M = M.over(D.ctx)
    return Divisor(D.ctx, [(apply(M, P), c) for P, c in D.terms.items()])


def orbit_sum(G, P):
    """The divisor sum over g in G of g(P), with multiplicity."""
    return Divisor(P.ctx, [(apply(g if g.ctx is P.ctx else g.over(P.ctx), P), 1) for g in G])


def _default_ext(C, L, ext):
    if ext is not None:
        return ext
    return compositum(C.ctx, L.ctx) if C.ctx is not L.ctx else C.ctx


def line_intersection_divisor(C, L, ext=None):
    """The pullback of L to C with exact multiplicities, over ``ext``.

    Raises LineComponent when L lies on C, and SplittingError (carrying the
    smallest sufficient extension degree) when the restriction has roots
    outside ``ext``.
    """
    ext = _default_ext(C, L, ext)
    A, B, f, m_inf = C.restrict(L, ext)
    terms = {}
    if m_inf:
        terms[B] = m_inf
    total = m_inf
    a, b = A.coords, B.coords
    for r, m in upoly.roots(ext, f):
        v = tuple(ext.add(x, ext.mul(r, y)) for x, y in zip(a, b))
        terms[ProjPoint._raw(ext, _normalize(ext, v))] = m
        total += m
    if total != C.degree:
        rest = f
        for r, m in upoly.roots(ext, f):
            for _ in range(m):
                rest = upoly.divmod_(ext, rest, [ext.neg(r), 1])[0]
        degs = upoly.factor_degrees(ext, rest)
        raise SplittingError(L, ext, degs, ext.n * lcm(*degs))
    return Divisor(ext, terms)


def splitting_field(C, L, base=None):
    """Smallest field (same seed family) over which L meets C in rational points."""
    base = _default_ext(C, L, base)
    _, _, f, _ = C.restrict(L, base)
    k = upoly.splitting_degree(base, f)
    return base if k == 1 else extension(base, k)


def line_divisor_split(C, L, base=None, max_bits=64, ext_bound=None):
    """line_intersection_divisor over the smallest splitting field of L.

    ``ext_bound`` caps the extension degree over the base field.
    """
    base = _default_ext(C, L, base)
    ext = splitting_field(C, L, base)
    if ext.p ** ext.n > 2 ** max_bits:
        raise CapExceeded(f"splitting field {ext} of {L} is too large")
    if ext_bound is not None and ext.n // base.n > ext_bound:
        raise CapExceeded(f"{L} splits only over {ext}, beyond the extension bound {ext_bound}")
    return line_intersection_divisor(C, L, ext)


class LinFormProduct:
    """The rational function const * prod(l_i ** e_i) with sum(e_i) = 0.

    Lines are stored normalized; ``const`` absorbs the scalars so that
    composition with a matrix stays an exact equality of functions.
    """

    def __init__(self, factors, const=1, ctx=None):
        items = factors.items() if isinstance(factors, dict) else factors
        acc = Counter()
        for L, e in items:
            if ctx is None:
                ctx = L.ctx
            elif L.ctx is not ctx:
                raise ContextMismatch(f"factor line over {L.ctx}, expected {ctx}")
            acc[L] += int(e)
        if ctx is None:
            raise ValueError("an empty product needs ctx")
        if sum(acc.values()) != 0:
            raise ValueError(f"exponents sum to {sum(acc.values())}, need 0")
        if not const:
            raise ValueError("constant must be nonzero")
        self.ctx = ctx
        self.factors = {L: e for L, e in sorted(acc.items()) if e}
        self.const = int(const)

    @classmethod
    def ratio(cls, num, den, power=1):
        """(num / den) ** power for two lines given by coordinate triples or ProjLine."""
        ctx = num.ctx
        return cls({num: power, den: -power} if num != den else {}, ctx=ctx)

    def __mul__(self, other):
        if isinstance(other, LinFormProduct):
            if other.ctx is not self.ctx:
                raise ContextMismatch("functions over different fields")
            return LinFormProduct(list(self.factors.items()) + list(other.factors.items()),
                                  self.ctx.mul(self.const, other.const), self.ctx)
        return NotImplemented

    def __pow__(self, k):
        return LinFormProduct({L: e * k for L, e in self.factors.items()},
                              self.ctx.pow(self.const, k) if k >= 0
                              else self.ctx.pow(self.ctx.inv(self.const), -k), self.ctx)

    def inverse(self):
        return self ** -1

    def __truediv__(self, other):
        return self * other.inverse()

    def scaled(self, c):
        return LinFormProduct(self.factors, self.ctx.mul(self.const, c), self.ctx)

    def over(self, ext):
        if ext is self.ctx:
            return self
        emb = embedding(self.ctx, ext)
        return LinFormProduct({L.over(ext): e for L, e in self.factors.items()},
                              emb(self.const), ext)

    def compose(self, M):
        """The function P -> self(M P)."""
        if M.ctx is not self.ctx:
            M = M.over(self.ctx)
        ctx = self.ctx
        mt = M.transpose_raw()
        const = self.const
        out = []
        for L, e in self.factors.items():
            u = tuple(ctx.add(ctx.add(ctx.mul(mt[i], L.coords[0]), ctx.mul(mt[i + 1], L.coords[1])),
                              ctx.mul(mt[i + 2], L.coords[2])) for i in range(0, 9, 3))
            lam = next(x for x in u if x)
            out.append((ProjLine(ctx, u), e))
            const = ctx.mul(const, ctx.pow(lam, e) if e > 0 else ctx.pow(ctx.inv(lam), -e))
        return LinFormProduct(out, const, ctx)

    def evaluate(self, P):
        """Value at P as a code, or None if P lies on a factor line."""
        ctx = P.ctx
        F = self.over(ctx) if ctx is not self.ctx else self
        acc = F.const
        for L, e in F.factors.items():
            v = _dot(ctx, L.coords, P.coords)
            if v == 0:
                return None
            acc = ctx.mul(acc, ctx.pow(v, e) if e > 0 else ctx.pow(ctx.inv(v), -e))
        return acc

    def evaluate_many(self, pts, ctx):
        """Vectorized values on an (N, 3) code array over a table field.

        Returns (values, defined) where defined is False on factor lines.
        """
        F = self.over(ctx) if ctx is not self.ctx else self
        kt = ctx.kt
        from .kernels import _np_add, _np_mul

        pts = np.asarray(pts, dtype=np.int64).reshape(-1, 3)
        logsum = np.full(pts.shape[0], int(kt.log[F.const]), dtype=np.int64)
        defined = np.ones(pts.shape[0], dtype=bool)
        for L, e in F.factors.items():
            a, b, c = (np.int64(x) for x in L.coords)
            v = _np_add(_np_add(_np_mul(pts[:, 0], a, kt), _np_mul(pts[:, 1], b, kt), kt),
                        _np_mul(pts[:, 2], c, kt), kt)
            defined &= v != 0
            logsum = logsum + e * kt.log[v]
        vals = kt.exp[np.mod(logsum, kt.qm1)]
        return np.where(defined, vals, 0), defined

    def lines(self):
        return list(self.factors)

    def is_constant(self):
        return not self.factors

    def validate(self, C):
        """Raise LineComponent if a factor line lies on C."""
        for L in self.factors:
            C.restrict(L, compositum(C.ctx, L.ctx) if C.ctx is not L.ctx else C.ctx)
        return True

    def __eq__(self, other):
        return (isinstance(other, LinFormProduct) and self.ctx.key == other.ctx.key
                and self.factors == other.factors and self.const == other.const)

    def __hash__(self):
        return hash((self.ctx.key, tuple(self.factors.items()), self.const))

    def __repr__(self):
        num = [f"{L}^{e}" if e != 1 else f"{L}" for L, e in self.factors.items() if e > 0]
        den = [f"{L}^{-e}" if e != -1 else f"{L}" for L, e in self.factors.items() if e < 0]
        c = "" if self.const == 1 else f"{self.const}*"
        return f"{c}({'*'.join(num) or '1'})/({'*'.join(den) or '1'})"


def divisor_of_function(C, F, ext=None):
    """Principal divisor of F on C: the exponent-weighted sum of line pullbacks."""
    if ext is None:
        ext = C.ctx if F.ctx is C.ctx else compositum(C.ctx, F.ctx)
    D = Divisor(ext)
    for L, e in F.factors.items():
        D = D + e * line_intersection_divisor(C, L, ext)
    return D


def coordinate_line(ctx, axis):
    """X = 0, Y = 0 or Z = 0 for axis 0, 1, 2."""
    v = [0, 0, 0]
    v[axis] = 1
    return ProjLine(ctx, v)


__all__ = [
    "Divisor", "FieldError", "LineComponent", "LinFormProduct", "ProjMatrix", "SplittingError",
    "coordinate_line", "divisor_of_function", "line_divisor_split", "line_intersection_divisor",
    "orbit_sum", "pushforward", "splitting_field",
]
