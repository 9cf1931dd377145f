"""JSON records for fields, geometry, divisors and reports.

Field elements are written as coefficient lists over GF(p) (lowest degree
first), matrices row-major, divisors as [point, coefficient] pairs. No
floating point appears anywhere.
"""

import dataclasses
import json

from .curve import PlaneCurve
from .divisor import Divisor, LinFormProduct
from .field import FieldCtx, make_field
from .projective import AutGroup, ProjLine, ProjMatrix, ProjPoint

FORMAT_VERSION = "galoispts/1"
GROUP_LISTING_CAP = 64


def field_record(ctx):
    return {"p": ctx.p, "n": ctx.n, "seed": ctx.seed, "modulus": list(ctx.modulus)}


def field_from_record(rec):
    ctx = make_field(int(rec["p"]), int(rec.get("n", 1)), int(rec.get("seed", 0)))
    if "modulus" in rec and list(rec["modulus"]) != list(ctx.modulus):
        raise ValueError(f"modulus {rec['modulus']} does not match {list(ctx.modulus)}")
    return ctx


def elem_record(ctx, v):
    return list(ctx.to_coeffs(v))


def elem_from_record(ctx, rec):
    if isinstance(rec, int):
        return ctx.from_int(rec) if ctx.n == 1 else rec
    return ctx.from_coeffs(rec)


def triple_record(obj):
    return [elem_record(obj.ctx, v) for v in obj.coords]


def point_from_record(ctx, rec):
    return ProjPoint(ctx, [elem_from_record(ctx, c) for c in rec])


def line_from_record(ctx, rec):
    return ProjLine(ctx, [elem_from_record(ctx, c) for c in rec])


def matrix_record(M):
    return [[elem_record(M.ctx, v) for v in row] for row in M.rows]


def matrix_from_record(ctx, rec):
    return ProjMatrix(ctx, [elem_from_record(ctx, c) for row in rec for c in row])


def divisor_record(D):
    return {"field": field_record(D.ctx),
            "terms": [[triple_record(P), c] for P, c in D.terms.items()],
            "degree": D.degree}


def curve_record(C):
    return {**field_record(C.ctx), "degree": C.degree,
            "monomials": [[list(e), elem_record(C.ctx, c)] for e, c in C.coeffs.items()]}


def curve_from_record(rec, strict=True):
    ctx = field_from_record(rec)
    coeffs = {tuple(e): elem_from_record(ctx, c) for e, c in rec["monomials"]}
    C = PlaneCurve(ctx, coeffs, strict=strict)
    if "degree" in rec and C.degree != rec["degree"]:
        raise ValueError(f"declared degree {rec['degree']} but polynomial has degree {C.degree}")
    return C


def function_record(F):
    return {"field": field_record(F.ctx), "const": elem_record(F.ctx, F.const),
            "factors": [[triple_record(L), e] for L, e in F.factors.items()]}


def function_from_record(ctx, rec):
    return LinFormProduct([(line_from_record(ctx, L), e) for L, e in rec["factors"]],
                          elem_from_record(ctx, rec.get("const", [1])), ctx)


def group_record(G):
    rec = {"order": G.order, "field": field_record(G.ctx),
           "generators": [matrix_record(g) for g in G.generators]}
    if G.order <= GROUP_LISTING_CAP:
        rec["elements"] = [matrix_record(g) for g in G.elements]
    return rec


def to_record(obj):
    """Recursively convert library objects to JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, FieldCtx):
        return field_record(obj)
    if isinstance(obj, (ProjPoint, ProjLine)):
        return triple_record(obj)
    if isinstance(obj, ProjMatrix):
        return matrix_record(obj)
    if isinstance(obj, Divisor):
        return divisor_record(obj)
    if isinstance(obj, PlaneCurve):
        return curve_record(obj)
    if isinstance(obj, LinFormProduct):
        return function_record(obj)
    if isinstance(obj, AutGroup):
        return group_record(obj)
    if hasattr(obj, "to_record"):
        return obj.to_record()
    if dataclasses.is_dataclass(obj):
        out = {f.name: to_record(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for extra in ("verdict", "ok", "group_order", "is_galois"):
            if hasattr(type(obj), extra) and isinstance(getattr(type(obj), extra), property):
                out[extra] = to_record(getattr(obj, extra))
        return out
    if isinstance(obj, dict):
        return {str(k): to_record(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_record(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(to_record(obj), sort_keys=True, indent=1) + "\n"
