"""Projections from points, decomposition groups and Galois-point certificates."""

from collections import Counter
from dataclasses import dataclass, field
from math import lcm

import numpy as np

from . import kernels
from . import poly as upoly
from .curve import CurveError, enumerate_points, sample_points
from .divisor import Divisor, line_intersection_divisor, divisor_of_function
from .field import ContextMismatch, compositum, embedding, extension
from .projective import (AutGroup, ProjMatrix, ProjPoint, apply, perspectivity_array,
                         plane_points)

GALOIS = "galois"
NOT_LINEAR = "not-galois-among-linear"


class SingularCenter(CurveError):
    def __init__(self, center):
        super().__init__(f"{center} is a singular point of the curve; it cannot be a Galois point")
        self.center = center


@dataclass
class GaloisReport:
    center: ProjPoint
    kind: str
    projection_degree: int
    group: AutGroup
    verdict: str
    character: list = None
    note: str = "verdict is among linear automorphisms only"

    @property
    def is_galois(self):
        return self.verdict == GALOIS

    @property
    def group_order(self):
        return self.group.order


def center_kind(C, center):
    """'outer', 'inner' or 'singular'."""
    P = center.over(C.ctx) if center.ctx is not C.ctx and _embeds(center.ctx, C.ctx) else center
    Cc = C.over(P.ctx) if P.ctx is not C.ctx else C
    if not Cc.contains(P):
        return "outer"
    return "inner" if any(Cc.gradient(P)) else "singular"


def _embeds(a, b):
    return a.p == b.p and b.n % a.n == 0


def projection_fiber(C, center, L, ext=None):
    """Fiber of the projection from ``center`` over the line L through it."""
    ctx = center.ctx if center.ctx.n >= L.ctx.n else L.ctx
    if not L.over(ctx).contains(center.over(ctx)):
        raise ValueError(f"{L} does not pass through {center}")
    kind = center_kind(C, center)
    if kind == "singular":
        raise SingularCenter(center)
    D = line_intersection_divisor(C, L, ext)
    if kind == "inner":
        D = D - Divisor.point(center.over(D.ctx))
    return D


def _prefilter_points(C, ctx, minimum):
    ext, pts = sample_points(C, ctx, minimum)
    return ext, np.array([P.coords for P in pts], dtype=np.int64).reshape(-1, 3)


def curve_preserving(C, mats, ctx, minimum=None):
    """Exact subset of the (K, 3, 3) code array ``mats`` over ctx preserving C.

    Candidates are first screened on a sample of curve points, then verified
    by exact polynomial substitution.
    """
    Cc = C.over(ctx)
    minimum = minimum or max(12, 3 * C.degree)
    ext, pts = _prefilter_points(Cc, ctx, minimum)
    keep = np.ones(len(mats), dtype=bool)
    if len(pts):
        m = mats if ext is ctx else embedding(ctx, ext).array()[mats]
        Ce = Cc.over(ext)
        keep = kernels.maps_onto(ext.kt, m, pts, Ce.exps, Ce.coefs)
    out = []
    for row in mats[keep]:
        M = ProjMatrix._raw(ctx, [int(x) for x in row.reshape(-1)])
        if Cc.is_preserved_by(M):
            out.append(M)
    return out


def decomposition_group(C, center, search_ext=None):
    """All curve-preserving perspectivities with the given center, as a group."""
    ctx = search_ext or C.ctx
    P = center.over(ctx) if center.ctx is not ctx else center
    mats = perspectivity_array(P, ctx)
    elems = curve_preserving(C, mats, ctx)
    return AutGroup(elems, elems)


def homology_character(M, center):
    """a(M): ratio of the eigenvalue at the center to the eigenvalue on the axis."""
    ctx = M.ctx
    v = center.over(ctx).coords if center.ctx is not ctx else center.coords
    e = M.entries
    Mv = [ctx.add(ctx.add(ctx.mul(e[i], v[0]), ctx.mul(e[i + 1], v[1])), ctx.mul(e[i + 2], v[2]))
          for i in range(0, 9, 3)]
    k = next(i for i in range(3) if v[i])
    lam = ctx.mul(Mv[k], ctx.inv(v[k]))
    if ctx.p == 2:
        det = _det3(ctx, e)
        c2 = ctx.mul(det, ctx.inv(lam))
        c = ctx.pow(c2, ctx.q // 2)
    else:
        tr = ctx.add(ctx.add(e[0], e[4]), e[8])
        c = ctx.mul(ctx.sub(tr, lam), ctx.inv(2 % ctx.p))
    return ctx.mul(lam, ctx.inv(c))


def _det3(ctx, m):
    from .projective import _det

    return _det(ctx, m)


def _character_table(group, center):
    table = [(g, homology_character(g, center)) for g in group]
    nontrivial = [a for g, a in table if not g.is_identity()]
    if group.order > 1 and all(a != 1 for a in nontrivial):
        return table
    return None


def is_galois_point(C, center, search_ext=None):
    kind = center_kind(C, center)
    if kind == "singular":
        raise SingularCenter(center)
    deg = C.degree if kind == "outer" else C.degree - 1
    G = decomposition_group(C, center, search_ext)
    verdict = GALOIS if G.order == deg else NOT_LINEAR
    return GaloisReport(center, kind, deg, G, verdict, _character_table(G, center))


def scan_galois_points(C, candidates="all", search_ext=None):
    """One report per non-singular candidate, in canonical candidate order."""
    ctx = search_ext or C.ctx
    if candidates == "all":
        candidates = plane_points(ctx)
    reports = []
    for P in sorted(candidates):
        if center_kind(C, P) == "singular":
            continue
        reports.append(is_galois_point(C, P, search_ext))
    return reports


def census_summary(reports):
    counts = Counter()
    for r in reports:
        counts[f"{r.kind}-{'galois' if r.is_galois else 'other'}"] += 1
    return dict(sorted(counts.items()))


# --------------------------------------------------------------------------
# fixed-field certificates
# --------------------------------------------------------------------------

def function_split_ext(C, F):
    """Smallest common field over which every factor line of F meets C rationally."""
    base = C.ctx if F.ctx is C.ctx else compositum(C.ctx, F.ctx)
    k = 1
    for L in F.factors:
        _, _, f, _ = C.restrict(L, base)
        k = lcm(k, upoly.splitting_degree(base, f))
    return base if k == 1 else extension(base, k)


def split_divisor(C, F, ext=None):
    """Principal divisor of F over a field where all its factor lines split."""
    ext = ext or function_split_ext(C, F)
    return divisor_of_function(C, F, ext)


@dataclass
class Certificate:
    ok: bool
    invariant: bool
    pole_degree: int
    group_order: int
    divisor: Divisor = None
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _witness_point(C, funcs, ext):
    """A point of C over ext where every function in ``funcs`` is defined and nonzero."""
    cur = ext
    while True:
        for P in enumerate_points(C, cur):
            if all(F.evaluate(P) not in (None, 0) for F in funcs):
                return P
        cur = extension(cur, 2)


def _larger(*ctxs):
    return max(ctxs, key=lambda c: c.n)


def functions_equal(C, F1, F2, ext=None):
    """Exact equality of F1, F2 as functions on C: same divisor and one common value."""
    if ext is None:
        ext = function_split_ext(C, F1)
        other = function_split_ext(C, F2)
        if other is not ext:
            ext = compositum(ext, other)
    if divisor_of_function(C, F1, ext) != divisor_of_function(C, F2, ext):
        return False
    P = _witness_point(C, [F1, F2], _larger(C.ctx, F1.ctx, F2.ctx))
    return F1.evaluate(P) == F2.evaluate(P)


def fixed_field_generator_check(C, G, F, ext=None):
    """Certify k(C)^G = k(F): F is G-invariant and its pole divisor has degree |G|."""
    if any(g.ctx is not C.ctx for g in G):
        G = AutGroup([g if g.ctx is C.ctx else g.over(C.ctx) for g in G])
    ext = ext or function_split_ext(C, F)
    D = divisor_of_function(C, F, ext)
    failures = []
    P = None
    for g in G:
        if g.is_identity():
            continue
        Fg = F.compose(g)
        if divisor_of_function(C, Fg, ext) != D:
            failures.append({"element": g, "reason": "divisor moved"})
            continue
        if P is None:
            P = _witness_point(C, [F] + [F.compose(h) for h in G], _larger(C.ctx, F.ctx))
        if Fg.evaluate(P) != F.evaluate(P):
            failures.append({"element": g, "reason": "value changed", "point": P})
    pole = D.negative().degree
    invariant = not failures
    return Certificate(invariant and pole == G.order, invariant, pole, G.order, D, failures)


__all__ = [
    "Certificate", "GALOIS", "GaloisReport", "NOT_LINEAR", "SingularCenter", "census_summary",
    "center_kind", "curve_preserving", "decomposition_group", "fixed_field_generator_check",
    "function_split_ext", "functions_equal", "homology_character", "is_galois_point",
    "projection_fiber", "scan_galois_points", "split_divisor",
]
