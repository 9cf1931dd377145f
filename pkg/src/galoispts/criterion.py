"""Executable criteria for plane models with three Galois points.

Outer criterion: conditions (a), (b), (c'), (d') for groups G_1, G_2, G_3 and
points Q_1, Q_2, Q_3 on a curve; inner criterion: (a), (b), (c), (d). The
plane model (f : g : 1), its verification, the Hermitian scenario and the
Fermat orbit condition are built on top.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations, product

import numpy as np

from . import _config
from .curve import (CurveError, NoCurve, PlaneCurve, Underdetermined, descend, enumerate_points,
                    interpolate_curve, make_curve, monomials)
from .divisor import (Divisor, LinFormProduct, coordinate_line, divisor_of_function,
                      line_divisor_split, orbit_sum)
from .field import compositum, extension, make_field, prime_power
from .galois import (GaloisReport, decomposition_group, fixed_field_generator_check,
                     function_split_ext, is_galois_point)
from .projective import (AutGroup, GroupTooLarge, ProjLine, ProjMatrix, ProjPoint, apply,
                         collinear, group_closure, line_through, orbit)

PASS, FAIL, UNVERIFIED = "pass", "fail", "unverified"


class ScenarioError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """A search that theory guarantees to succeed came back empty."""


class PrescriptionError(CurveError):
    def __init__(self, name, got, want):
        super().__init__(f"divisor of {name} is {got}, expected {want}")
        self.name = name
        self.got = got
        self.want = want


class BirationalityError(CurveError):
    def __init__(self, pairs, bound):
        super().__init__(f"{len(pairs)} colliding pairs exceed the allowed {bound}: {pairs[:5]}")
        self.pairs = pairs
        self.bound = bound


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

@dataclass
class ConditionResult:
    name: str
    status: str
    witnesses: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == PASS


@dataclass
class CriterionReport:
    kind: str
    conditions: dict

    @property
    def verdict(self):
        states = [c.status for c in self.conditions.values()]
        if FAIL in states:
            return FAIL
        if UNVERIFIED in states:
            return UNVERIFIED
        return PASS

    @property
    def passed(self):
        return self.verdict == PASS

    def failed_conditions(self):
        return [k for k, c in self.conditions.items() if c.status == FAIL]


@dataclass
class ScenarioParams:
    p: int
    q: int
    s: int
    m: int
    d: int
    base: tuple
    ext: tuple = None

    def __post_init__(self):
        if self.s * self.m != self.q - 1:
            raise ScenarioError(f"s*m = {self.s * self.m} differs from q-1 = {self.q - 1}")
        if self.d != self.s * (self.q + 1):
            raise ScenarioError(f"model degree {self.d} differs from s(q+1)")


def _groups_in(C, groups):
    return [G if G.ctx is C.ctx else G.over(C.ctx) for G in groups]


def _check_a(C, groups, generators):
    out = []
    status = PASS
    for i, G in enumerate(groups, 1):
        gen = (generators or {}).get(i)
        if gen is None:
            out.append({"group": i, "certificate": None})
            if status == PASS:
                status = UNVERIFIED
            continue
        cert = fixed_field_generator_check(C, G, gen)
        out.append({"group": i, "certificate": cert, "generator": gen})
        if not cert.ok:
            status = FAIL
    return ConditionResult("a", status, out)


def _check_b(groups):
    out = []
    status = PASS
    for (i, Gi), (j, Gj) in combinations(enumerate(groups, 1), 2):
        common = [g for g in Gi.intersection(Gj) if not g.is_identity()]
        if common:
            status = FAIL
            out.append({"pair": [i, j], "common": common})
    return ConditionResult("b", status, out)


def _check_orbits(groups, points, name):
    out = []
    status = PASS
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        oj = orbit(groups[i], points[j])
        ok = orbit(groups[i], points[k])
        if oj == ok:
            status = FAIL
            out.append({"group": i + 1, "points": [j + 1, k + 1], "orbit": oj})
    return ConditionResult(name, status, out)


def check_outer_criterion(C, groups, points, generators=None):
    """Conditions (a), (b), (c'), (d') for groups G_1..G_3 and points Q_1..Q_3.

    ``generators`` maps a group index (1..3) to a LinFormProduct proposed as
    generator of its fixed field; a missing one leaves (a) unverified.
    """
    groups = _groups_in(C, groups)
    conds = {"a": _check_a(C, groups, generators), "b": _check_b(groups)}
    wit = []
    status = PASS
    for i, j in combinations(range(3), 2):
        k = 3 - i - j
        lhs = orbit_sum(groups[i], points[k])
        rhs = orbit_sum(groups[j], points[k])
        same = lhs == rhs
        wit.append({"i": i + 1, "j": j + 1, "k": k + 1, "lhs": lhs, "rhs": rhs, "equal": same})
        if not same:
            status = FAIL
    conds["c'"] = ConditionResult("c'", status, wit)
    conds["d'"] = _check_orbits(groups, points, "d'")
    return CriterionReport("outer", conds)


def check_inner_criterion(C, groups, points, generators=None):
    """Conditions (a), (b), (c), (d) for smooth points P_1..P_3 of C."""
    groups = _groups_in(C, groups)
    conds = {"a": _check_a(C, groups, generators), "b": _check_b(groups)}
    wit = []
    status = PASS
    for i, j in permutations(range(3), 2):
        if i > j:
            continue
        lhs = Divisor.point(points[i]) + orbit_sum(groups[i], points[j])
        rhs = Divisor.point(points[j]) + orbit_sum(groups[j], points[i])
        same = lhs == rhs
        wit.append({"i": i + 1, "j": j + 1, "lhs": lhs, "rhs": rhs, "equal": same})
        if not same:
            status = FAIL
    conds["c"] = ConditionResult("c", status, wit)
    conds["d"] = _check_orbits(groups, points, "d")
    return CriterionReport("inner", conds)


# --------------------------------------------------------------------------
# plane models
# --------------------------------------------------------------------------

def _dmax(*divs):
    ctx = divs[0].ctx
    acc = {}
    for D in divs:
        for P, c in D.terms.items():
            acc[P] = max(acc.get(P, 0), c)
    return Divisor(ctx, acc)


def _dmin(*divs):
    ctx = divs[0].ctx
    keys = set().union(*(D.terms for D in divs))
    return Divisor(ctx, {P: min(D.terms.get(P, 0) for D in divs) for P in keys})


VERTICES = ((0, 1, 0), (1, 0, 0), (0, 0, 1))


@dataclass
class PlaneModel:
    kind: str
    source: PlaneCurve
    groups: tuple
    points: tuple
    f: LinFormProduct
    g: LinFormProduct
    divisors: dict
    pullbacks: dict
    eval_field: object = None
    image_points: list = None
    collisions: list = None
    collision_bound: int = None
    image: PlaneCurve = None
    image_ext: PlaneCurve = None
    image_degree: int = None
    incidences: dict = None
    notes: list = field(default_factory=list)

    @property
    def vertices(self):
        ctx = self.source.ctx
        return tuple(ProjPoint(ctx, v) for v in VERTICES)

    @property
    def projection_functions(self):
        return (self.f, self.g, self.g / self.f)

    @property
    def expected_degree(self):
        n = self.groups[0].order
        return n if self.kind == "outer" else n + 1


def _source_genus(C):
    n = C.degree
    return (n - 1) * (n - 2) // 2


def _model_field(C, need, ext_bound=None):
    k = 1
    while True:
        ext = extension(C.ctx, k)
        if ext_bound is not None and k > ext_bound:
            raise CurveError(f"no extension of {C.ctx} of degree <= {ext_bound} has {need} points")
        if ext.q > _config.SCAN_CAP:
            raise CurveError(f"no extension of {C.ctx} within the scan cap has {need} points")
        pts = enumerate_points(C, ext)
        if len(pts) >= need:
            return ext, pts
        k += 1


def _images(f, g, pts, ext):
    """Normalized images (f : g : 1) of the points where both are defined."""
    arr = np.array([P.coords for P in pts], dtype=np.int64).reshape(-1, 3)
    fv, fd = f.evaluate_many(arr, ext)
    gv, gd = g.evaluate_many(arr, ext)
    ok = fd & gd
    kt = ext.kt
    out = []
    for idx in np.nonzero(ok)[0]:
        a, b = int(fv[idx]), int(gv[idx])
        if a:
            ia = ext.inv(a)
            v = (1, ext.mul(b, ia), ia)
        elif b:
            v = (0, 1, ext.inv(b))
        else:
            v = (0, 0, 1)
        out.append((pts[idx], ProjPoint._raw(ext, v)))
    return out


def build_plane_model(C, groups, points, f, g, kind="outer", strict=True, interpolate=True,
                      extra_points=32, ext_bound=None):
    """The map (f : g : 1) from C, with prescription, incidence and birationality checks."""
    groups = tuple(_groups_in(C, groups))
    Q1, Q2, Q3 = points
    ext = function_split_ext(C, f)
    ext2 = function_split_ext(C, g)
    if ext2 is not ext:
        ext = compositum(ext, ext2)
    div_f = divisor_of_function(C, f, ext)
    div_g = divisor_of_function(C, g, ext)
    if kind == "outer":
        want_f = orbit_sum(groups[0], Q2) - orbit_sum(groups[0], Q3)
        want_g = orbit_sum(groups[1], Q1) - orbit_sum(groups[1], Q3)
    else:
        want_f = orbit_sum(groups[0], Q3) - orbit_sum(groups[0], Q2)
        want_g = orbit_sum(groups[1], Q3) - orbit_sum(groups[1], Q1)
    notes = []
    for name, got, want in (("f", div_f, want_f), ("g", div_g, want_g)):
        if got != want:
            if strict:
                raise PrescriptionError(name, got, want)
            notes.append(f"divisor of {name} is {got}, prescription {want}")
    zero = Divisor(ext)
    D = _dmax(div_f.negative(), div_g.negative(), zero)
    EX, EY, EZ = div_f + D, div_g + D, D
    base = _dmin(EX, EY, EZ)
    pull = {"X": EX - base, "Y": EY - base, "Z": EZ - base}
    deg = pull["Z"].degree
    model = PlaneModel(kind, C, groups, tuple(points), f, g,
                       {"f": div_f, "g": div_g, "D": D, "base": base}, pull, notes=notes)
    model.incidences = _incidences(model)
    _check_incidences(model, strict)
    bound = (deg - 1) * (deg - 2) // 2 - _source_genus(C)
    n_mono = len(monomials(deg))
    need = max(n_mono, deg * deg + 1) + max(bound, 0) + len(D.terms) + len(div_f.terms) + 4
    field_, pts = _model_field(C, need, ext_bound)
    pairs = _images(f, g, pts, field_)
    model.eval_field = field_
    model.image_points = [img for _, img in pairs]
    fibers = {}
    for src, img in pairs:
        fibers.setdefault(img, []).append(src)
    collisions = [(img, srcs) for img, srcs in sorted(fibers.items()) if len(srcs) > 1]
    count = sum(len(s) * (len(s) - 1) // 2 for _, s in collisions)
    model.collisions = collisions
    model.collision_bound = bound
    if count > max(bound, 0):
        if strict:
            raise BirationalityError([tuple(s) for _, s in collisions], bound)
        notes.append(f"{count} colliding pairs exceed {bound}; map may not be birational")
    if interpolate:
        distinct = sorted(fibers)
        use = distinct[:max(n_mono, deg * deg + 1) + extra_points]
        try:
            res = interpolate_curve(use, deg)
        except NoCurve as e:
            if strict:
                raise
            notes.append(str(e))
            res = None
        if isinstance(res, Underdetermined):
            if strict:
                raise CurveError(f"image interpolation underdetermined: {res}")
            notes.append(repr(res))
            res = None
        if res is not None:
            vals = res.evaluate_many(np.array([P.coords for P in distinct], dtype=np.int64))
            if np.any(vals != 0):
                raise CurveError("interpolated image misses some image points")
            model.image_ext = res
            try:
                model.image = descend(res, C.ctx)
            except CurveError:
                model.image = res
                notes.append("image curve is not defined over the base field")
            model.image_degree = res.degree
            if strict and res.degree != model.expected_degree:
                raise CurveError(f"image degree {res.degree} differs from expected "
                                 f"{model.expected_degree}")
    return model


def _incidences(model):
    """For each designated point, the coordinate lines its image lies on."""
    out = {}
    for k, Q in enumerate(model.points, 1):
        Qe = Q.over(model.pullbacks["Z"].ctx)
        out[k] = [ax for ax, E in model.pullbacks.items() if E.terms.get(Qe, 0) > 0]
    return out


def _check_incidences(model, strict):
    if model.kind == "outer":
        # phi(Q_1) on Y=0, phi(Q_2) on X=0, phi(Q_3) on Z=0
        want = {1: "Y", 2: "X", 3: "Z"}
        bad = [k for k, ax in want.items() if ax not in model.incidences[k]]
    else:
        # phi(P_1) = (0:1:0), phi(P_2) = (1:0:0), phi(P_3) = (0:0:1)
        want = {1: ["X", "Z"], 2: ["Y", "Z"], 3: ["X", "Y"]}
        bad = [k for k, axes in want.items() if sorted(model.incidences[k]) != axes]
    if bad:
        msg = f"incidence check failed for points {bad}: {model.incidences}"
        if strict:
            raise CurveError(msg)
        model.notes.append(msg)


@dataclass
class VertexResult:
    vertex: ProjPoint
    group_order: int
    projection_degree: int
    certificate: object
    linear: GaloisReport = None
    galois: bool = False
    on_image: bool = None

    @property
    def mode(self):
        if self.linear is not None and self.linear.is_galois:
            return "linear"
        return "source"


@dataclass
class ModelVerification:
    vertices: list
    noncollinear: bool

    @property
    def ok(self):
        return self.noncollinear and all(v.galois for v in self.vertices)

    def failing(self):
        return [i + 1 for i, v in enumerate(self.vertices) if not v.galois]


def verify_model_galois(model, linear=True):
    """Certify the three coordinate vertices of the model as Galois points.

    Each vertex is certified on the source: the projection function from it
    (f, g and g/f) must generate the fixed field of its group, with pole
    degree equal to the projection degree of the image. The decomposition
    group of the vertex among linear maps of the image is reported too.
    """
    C = model.source
    out = []
    deg = model.image_degree or model.pullbacks["Z"].degree
    for i, (V, F, G) in enumerate(zip(model.vertices, model.projection_functions, model.groups)):
        proj_deg = deg if model.kind == "outer" else deg - 1
        cert = fixed_field_generator_check(C, G, F)
        rep = None
        if linear and model.image is not None:
            try:
                rep = is_galois_point(model.image, V, model.image.ctx)
            except CurveError:
                rep = None
        on_image = None
        if model.image is not None:
            on_image = model.image.contains(V.over(model.image.ctx))
        ok = cert.ok and cert.pole_degree == proj_deg
        if on_image is not None:
            # outer vertices must miss the image, inner ones must lie on it
            ok = ok and on_image == (model.kind == "inner")
        out.append(VertexResult(V, G.order, proj_deg, cert, rep, ok, on_image))
    return ModelVerification(out, not collinear(*model.vertices))


# --------------------------------------------------------------------------
# Hermitian scenario
# --------------------------------------------------------------------------

def A(ctx, a, q):
    """diag(a^(q+1), a, 1)."""
    return ProjMatrix.diag(ctx, ctx.pow(a, q + 1), a, 1)


def power_identity(q, s, ctx):
    """Check (A_{a^m})^s = diag(1, a^(q-1), 1) entrywise for every a != 0."""
    m = (q - 1) // s
    rows = []
    for a in range(1, ctx.q):
        b = ctx.pow(a, m)
        lhs = [ctx.pow(ctx.pow(b, q + 1), s), ctx.pow(b, s), 1]
        rhs = [1, ctx.pow(a, q - 1), 1]
        rows.append((a, lhs == rhs))
    return rows


def swap_family(C, fixed, u, v):
    """All automorphisms of C fixing ``fixed`` and swapping u and v, in canonical order."""
    ctx = C.ctx
    cols = [fixed.coords, u.coords, v.coords]
    B = ProjMatrix(ctx, [cols[c][r] for r in range(3) for c in range(3)])
    Binv = B.inverse()
    out = []
    for beta, gamma in product(range(1, ctx.q), repeat=2):
        N = ProjMatrix(ctx, [1, 0, 0, 0, 0, gamma, 0, beta, 0])
        M = B @ N @ Binv
        if C.is_preserved_by(M):
            out.append(M)
    return sorted(set(out))


def translation(ctx, q, b, c):
    """(x, y) -> (x + b^q y + c, y + b) on the chart Z = 1; needs c^q + c = b^(q+1)."""
    return ProjMatrix(ctx, [1, ctx.pow(b, q), c, 0, 1, b, 0, 0, 1])


W_SWAP = (0, 0, 1, 0, 1, 0, 1, 0, 0)


def transfer_family(C, q, target, fix_q1=True):
    """Automorphisms of the Hermitian curve fixing Q_1 and sending Q_2 to ``target``.

    These are T A_a, T the translation taking (0:0:1) to target and a running
    over the nonzero elements. With ``fix_q1`` false the roles of Q_1 and Q_2
    are exchanged by conjugating with (X:Y:Z) -> (Z:Y:X).
    """
    ctx = C.ctx
    W = ProjMatrix(ctx, W_SWAP)
    t = target if fix_q1 else apply(W, target)
    if t.coords[2] == 0:
        raise ScenarioError(f"{target} is not reachable by a translation")
    zi = ctx.inv(t.coords[2])
    x, y = ctx.mul(t.coords[0], zi), ctx.mul(t.coords[1], zi)
    T = translation(ctx, q, y, x)
    out = []
    for a in range(1, ctx.q):
        M = T @ A(ctx, a, q)
        if not fix_q1:
            M = W @ M @ W
        if not C.is_preserved_by(M):
            raise InconsistencyError(f"{M} does not preserve the Hermitian curve")
        out.append(M)
    return sorted(set(out))


def _pick_transfer(C, q, fixed, moved, target, fix_q1):
    """Prefer an element swapping ``moved`` and ``target``; else the first one."""
    fam = transfer_family(C, q, target, fix_q1)
    if not fam:
        raise InconsistencyError("no automorphism moves the designated points as required")
    swaps = [M for M in fam if apply(M, target) == moved]
    return (swaps or fam)[0], bool(swaps)


def linear_automorphism_group(C):
    """All linear automorphisms of C over its base field (exhaustive; tiny fields only)."""
    from . import kernels

    ctx = C.ctx
    if ctx.q ** 8 > 4 * _config.SCAN_CAP:
        raise CurveError(f"exhaustive automorphism search over {ctx} is too large")
    q = ctx.q
    codes = np.array(list(product(range(q), repeat=9)), dtype=np.int64)
    nz = codes != 0
    first = np.argmax(nz, axis=1)
    lead = codes[np.arange(len(codes)), first]
    codes = codes[nz.any(axis=1) & (lead == 1)].reshape(-1, 3, 3)
    pts = np.array([P.coords for P in enumerate_points(C, ctx)], dtype=np.int64)
    keep = kernels.maps_onto(ctx.kt, codes, pts, C.exps, C.coefs)
    out = []
    for row in codes[keep]:
        try:
            M = ProjMatrix(ctx, [int(x) for x in row.reshape(-1)])
        except ValueError:
            continue
        if C.is_preserved_by(M):
            out.append(M)
    return AutGroup(out)


@dataclass
class HermitianScenario:
    params: ScenarioParams
    curve: PlaneCurve
    groups: tuple
    points: tuple
    generators: dict
    Phi: ProjMatrix
    Psi: ProjMatrix
    power_identity: list
    report: CriterionReport
    swaps: tuple = (False, False)

    @property
    def f(self):
        return self.generators[1]

    @property
    def g(self):
        return self.generators[2]

    def model(self, **kw):
        return build_plane_model(self.curve, self.groups, self.points, self.f, self.g, **kw)


def hermitian_scenario(q, s, seed=0, max_q=None):
    """Groups G_1, G_2, G_3 of order s(q+1) on the Hermitian curve over GF(q^2)."""
    p, e = prime_power(q)
    if s < 1 or (q - 1) % s:
        raise ScenarioError(f"s must divide q-1 (q={q}, s={s})")
    if max_q is not None and q > max_q:
        raise ScenarioError(f"q={q} exceeds the configured bound {max_q}")
    K = make_field(p, 2 * e, seed)
    m = (q - 1) // s
    params = ScenarioParams(p, q, s, m, s * (q + 1), K.descriptor())
    C = make_curve({"hermitian": q}, K)
    Q1 = ProjPoint(K, (1, 0, 0))
    Q2 = ProjPoint(K, (0, 0, 1))
    Q3 = next(P for P in enumerate_points(C) if P.coords[1] != 0)
    a = K.primitive
    gen = A(K, K.pow(a, m), q)
    G3 = group_closure([gen])
    if G3.order != s * (q + 1):
        raise InconsistencyError(f"G_3 has order {G3.order}, expected {s * (q + 1)}")
    ident = power_identity(q, s, K)
    if not all(ok for _, ok in ident):
        raise InconsistencyError("power identity failed")
    Phi, phi_swaps = _pick_transfer(C, q, Q1, Q2, Q3, fix_q1=True)
    Psi, psi_swaps = _pick_transfer(C, q, Q2, Q1, Q3, fix_q1=False)
    G2 = G3.conjugate(Phi)
    G1 = G3.conjugate(Psi)
    X0, Z0 = coordinate_line(K, 0), coordinate_line(K, 2)
    F3 = LinFormProduct({X0: s, Z0: -s})
    f = F3.compose(Psi.inverse())
    g = F3.inverse().compose(Phi.inverse())
    gens = {1: f, 2: g, 3: F3}
    report = check_outer_criterion(C, (G1, G2, G3), (Q1, Q2, Q3), gens)
    return HermitianScenario(params, C, (G1, G2, G3), (Q1, Q2, Q3), gens, Phi, Psi, ident,
                             report, (phi_swaps, psi_swaps))


@dataclass
class InnerScenario:
    curve: PlaneCurve
    groups: tuple
    points: tuple
    generators: dict
    report: CriterionReport

    def model(self, **kw):
        return build_plane_model(self.curve, self.groups, self.points, self.generators[1],
                                 self.generators[2], kind="inner", **kw)


def inner_functions(P1, P2, P3):
    l12, l13, l23 = line_through(P1, P2), line_through(P1, P3), line_through(P2, P3)
    f = LinFormProduct({l13: 1, l12: -1})
    g = LinFormProduct({l23: 1, l12: -1})
    h = LinFormProduct({l13: 1, l23: -1})
    return {1: f, 2: g, 3: h}


def inner_scenario(C, points=None):
    """Three inner Galois points of C with their decomposition groups.

    Without explicit points, the first non-collinear triple of rational inner
    Galois points (canonical order) passing the inner criterion is used.
    """
    pts = enumerate_points(C)
    reports = {P: is_galois_point(C, P) for P in pts}
    galois = [P for P in pts if reports[P].is_galois]
    triples = [tuple(points)] if points else combinations(galois, 3)
    for T in triples:
        if collinear(*T):
            continue
        groups = tuple(reports[P].group if P in reports else decomposition_group(C, P) for P in T)
        gens = inner_functions(*T)
        rep = check_inner_criterion(C, groups, T, gens)
        if rep.passed or points:
            return InnerScenario(C, groups, T, gens, rep)
    raise InconsistencyError("no triple of inner Galois points satisfies the criterion")


# --------------------------------------------------------------------------
# Fermat orbit condition
# --------------------------------------------------------------------------

@dataclass
class OrbitConditionResult:
    holds: bool
    hypothesis: bool
    group_order: int = None
    support: list = None
    witness: dict = None
    reports: list = None
    reason: str = None


def _first_escape(G, S, field_):
    Sset = set(S)
    mats = [g if g.ctx is field_ else g.over(field_) for g in G]
    for Q in S:
        for g in mats:
            gQ = apply(g, Q)
            if gQ not in Sset:
                return {"point": Q, "element": g, "image": gQ}
    return None


def fermat_orbit_condition(C, P1, P2, P3, ext=None, cap=None, ext_bound=None):
    """Orbit condition for three centers of a smooth plane curve acting linearly."""
    cap = _config.GROUP_CAP if cap is None else cap
    centers = (P1, P2, P3)
    if collinear(*centers):
        return OrbitConditionResult(False, False, reason="centers are collinear")
    reports = [is_galois_point(C, P, ext) for P in centers]
    if not all(r.kind == "outer" and r.is_galois for r in reports):
        bad = [i + 1 for i, r in enumerate(reports) if not (r.kind == "outer" and r.is_galois)]
        return OrbitConditionResult(False, False, reports=reports,
                                    reason=f"centers {bad} are not outer Galois points")
    gens = [g for r in reports for g in r.group.elements if not g.is_identity()]
    G = group_closure(gens, cap) if gens else AutGroup([ProjMatrix.identity(reports[0].group.ctx)])
    divs = [line_divisor_split(C, line_through(Pi, Pj), ext_bound=ext_bound) for Pi, Pj in
            ((P1, P2), (P2, P3), (P1, P3))]
    field_ = divs[0].ctx
    for D in divs[1:]:
        field_ = compositum(field_, D.ctx)
    S = sorted({P.over(field_) for D in divs for P in D.support})
    wit = _first_escape(G, S, field_)
    return OrbitConditionResult(wit is None, True, G.order, S, wit, reports)


def model_orbit_condition(model, cap=None):
    """Orbit condition for a plane model, with the groups acting on the source.

    S is the preimage of the three vertex lines, read off the pullback
    supports; G is generated by the three source groups.
    """
    cap = _config.GROUP_CAP if cap is None else cap
    ver = verify_model_galois(model, linear=False)
    if not ver.ok:
        return OrbitConditionResult(False, False, reason=f"vertices {ver.failing()} not certified")
    gens = [g for G in model.groups for g in G.elements if not g.is_identity()]
    G = group_closure(gens, cap)
    field_ = model.pullbacks["Z"].ctx
    S = sorted({P for E in model.pullbacks.values() for P in E.support})
    wit = _first_escape(G, S, field_)
    return OrbitConditionResult(wit is None, True, G.order, S, wit, None)


def diagonal_in_frame(G, centers):
    """True when every element of G is diagonal in the basis of the three centers."""
    ctx = G.ctx
    cols = [P.over(ctx).coords if P.ctx is not ctx else P.coords for P in centers]
    B = ProjMatrix(ctx, [cols[c][r] for r in range(3) for c in range(3)])
    Binv = B.inverse()
    for g in G:
        e = (Binv @ g @ B).entries
        if any(e[i] for i in (1, 2, 3, 5, 6, 7)):
            return False
    return True


def wrong_g_model(scn, element=None):
    """Negative control: g composed with a non-trivial element of G_3."""
    gamma = element or next(h for h in scn.groups[2] if not h.is_identity())
    g_bad = scn.g.compose(gamma)
    return build_plane_model(scn.curve, scn.groups, scn.points, scn.f, g_bad, strict=False)


__all__ = [
    "A", "BirationalityError", "ConditionResult", "CriterionReport", "FAIL", "HermitianScenario",
    "InconsistencyError", "InnerScenario", "ModelVerification", "OrbitConditionResult", "PASS",
    "PlaneModel", "PrescriptionError", "ScenarioError", "ScenarioParams", "UNVERIFIED",
    "VertexResult", "build_plane_model", "check_inner_criterion", "check_outer_criterion",
    "diagonal_in_frame", "fermat_orbit_condition", "hermitian_scenario", "inner_functions",
    "inner_scenario", "linear_automorphism_group", "model_orbit_condition", "power_identity",
    "swap_family", "transfer_family", "translation", "verify_model_galois", "wrong_g_model",
]
