"""Command line runner: scenario files in, JSON reports out.

Exit status is 0 when the overall verdict is pass, 1 on a verified failure and
2 when something could not be verified (errors, caps, malformed input).
"""

import argparse
import json
import os
import sys
import tempfile

from . import _config
from .criterion import (FAIL, PASS, UNVERIFIED, ScenarioError, build_plane_model,
                        check_inner_criterion, check_outer_criterion, fermat_orbit_condition,
                        hermitian_scenario, inner_functions, model_orbit_condition,
                        verify_model_galois, wrong_g_model)
from .curve import CurveError, make_curve
from .field import CapExceeded, FieldError, field_for_order, make_field, prime_power
from .galois import census_summary, decomposition_group, scan_galois_points
from .projective import GroupTooLarge, ProjPoint, group_closure, plane_points
from .serialize import (FORMAT_VERSION, curve_from_record, curve_record, elem_record,
                        field_from_record, function_from_record, matrix_from_record,
                        point_from_record, to_record, triple_record)

COMMANDS = ("hermitian", "outer-criterion", "inner-criterion", "fermat-check", "scan")
EXIT = {PASS: 0, FAIL: 1, UNVERIFIED: 2}


class ScenarioFormatError(ValueError):
    """Malformed scenario file; the message names the offending line or field."""


def tool_version():
    from . import __version__

    return __version__


# --------------------------------------------------------------------------
# scenario parsing
# --------------------------------------------------------------------------

def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: cannot read scenario ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return validate_scenario(data, path)


def validate_scenario(data, where="scenario"):
    if not isinstance(data, dict):
        raise ScenarioFormatError(f"{where}: top level must be an object")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise ScenarioFormatError(f"{where}: field 'version' must be {FORMAT_VERSION!r}, got {version!r}")
    command = data.get("command")
    if command not in COMMANDS:
        raise ScenarioFormatError(f"{where}: field 'command' must be one of {list(COMMANDS)}, got {command!r}")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioFormatError(f"{where}: field 'params' must be an object")
    return {"version": version, "command": command, "params": params}


def _need(params, key, kind=None):
    if key not in params:
        raise ScenarioFormatError(f"missing field 'params.{key}'")
    v = params[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise ScenarioFormatError(f"field 'params.{key}' must be an integer, got {v!r}")
    return v


def _int(params, key, default):
    v = params.get(key, default)
    if v is not None and (not isinstance(v, int) or isinstance(v, bool)):
        raise ScenarioFormatError(f"field 'params.{key}' must be an integer, got {v!r}")
    return v


def _field(params):
    """Field from params.field: an order (13, "2^4") or {"p", "n", "seed"}."""
    spec = _need(params, "field")
    seed = _int(params, "seed", 0)
    try:
        if isinstance(spec, dict):
            return field_from_record({"seed": seed, **spec})
        return parse_field(spec, seed)
    except (FieldError, ValueError, KeyError) as exc:
        raise ScenarioFormatError(f"field 'params.field': {exc}") from exc


def parse_field(spec, seed=0):
    if isinstance(spec, int):
        return field_for_order(spec, seed)
    s = str(spec).strip()
    if "^" in s:
        p, n = s.split("^")
        return make_field(int(p), int(n), seed)
    return field_for_order(int(s), seed)


def parse_curve_spec(text):
    """'fermat:4' or 'hermitian:2' into the dict form accepted by make_curve."""
    kind, _, arg = str(text).partition(":")
    if not arg:
        raise ScenarioFormatError(f"curve spec {text!r} must look like 'fermat:4' or 'hermitian:2'")
    return {kind.strip(): int(arg)}


def _curve(params, ctx):
    spec = _need(params, "curve")
    try:
        if isinstance(spec, str):
            spec = parse_curve_spec(spec)
        if isinstance(spec, dict) and "monomials" in spec:
            return curve_from_record({**ctx.descriptor(), **spec})
        if isinstance(spec, dict) and "explicit" in spec:
            terms = [(tuple(e), _elem(ctx, c)) for e, c in spec["explicit"]]
            return make_curve({"explicit": terms}, ctx)
        return make_curve(spec, ctx)
    except (CurveError, FieldError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"field 'params.curve': {exc}") from exc


def _elem(ctx, c):
    return ctx.from_coeffs(c) if isinstance(c, list) else ctx.from_int(c)


def _points(params, key, ctx):
    raw = _need(params, key)
    try:
        return tuple(point_from_record(ctx, P) for P in raw)
    except (FieldError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"field 'params.{key}': {exc}") from exc


def _groups(params, ctx):
    raw = _need(params, "groups")
    out = []
    for i, G in enumerate(raw):
        try:
            gens = [matrix_from_record(ctx, M) for M in G["generators"]]
            out.append(group_closure(gens))
        except (KeyError, TypeError, ValueError, FieldError) as exc:
            raise ScenarioFormatError(f"field 'params.groups[{i}]': {exc}") from exc
    return tuple(out)


def _functions(params, ctx):
    raw = params.get("functions")
    if raw is None:
        return None
    try:
        return {int(k): function_from_record(ctx, v) for k, v in raw.items()}
    except (KeyError, TypeError, ValueError, FieldError) as exc:
        raise ScenarioFormatError(f"field 'params.functions': {exc}") from exc


# --------------------------------------------------------------------------
# report pieces
# --------------------------------------------------------------------------

def criterion_record(rep):
    return {"kind": rep.kind, "verdict": rep.verdict,
            "failed_conditions": list(rep.failed_conditions()),
            "conditions": {k: {"status": c.status, "witnesses": to_record(c.witnesses)}
                           for k, c in rep.conditions.items()}}


def galois_record(r):
    rec = {"center": triple_record(r.center), "kind": r.kind,
           "projection_degree": r.projection_degree, "group_order": r.group.order,
           "verdict": r.verdict, "generators": to_record(list(r.group.generators))}
    if r.character is not None:
        ctx = r.group.ctx
        rec["character"] = [elem_record(ctx, a) for _, a in r.character]
    return rec


def model_record(model):
    rec = {"kind": model.kind,
           "divisors": {k: to_record(D) for k, D in model.divisors.items()},
           "pullbacks": {k: to_record(D) for k, D in model.pullbacks.items()},
           "image_degree": model.image_degree,
           "expected_degree": model.expected_degree,
           "collision_bound": model.collision_bound,
           "collisions": to_record(model.collisions or []),
           "incidences": to_record(model.incidences),
           "notes": list(model.notes)}
    if model.eval_field is not None:
        rec["eval_field"] = model.eval_field.descriptor()
        rec["image_points"] = len(model.image_points or [])
    if model.image is not None:
        rec["image"] = curve_record(model.image)
    return rec


def verification_record(ver):
    out = []
    for v in ver.vertices:
        out.append({"vertex": triple_record(v.vertex), "group_order": v.group_order,
                    "projection_degree": v.projection_degree, "galois": v.galois,
                    "mode": v.mode, "on_image": v.on_image, "pole_degree": v.certificate.pole_degree,
                    "invariant": v.certificate.invariant,
                    "failures": to_record(v.certificate.failures),
                    "linear": None if v.linear is None else galois_record(v.linear)})
    return {"ok": ver.ok, "noncollinear": ver.noncollinear, "failing": ver.failing(),
            "vertices": out}


def orbit_record(res):
    return {"holds": res.holds, "hypothesis": res.hypothesis, "group_order": res.group_order,
            "reason": res.reason, "support": to_record(res.support or []),
            "witness": to_record(res.witness),
            "reports": [galois_record(r) for r in res.reports or []]}


# --------------------------------------------------------------------------
# workflows
# --------------------------------------------------------------------------

def run_hermitian(params, opts):
    q = _need(params, "q", int)
    s = _need(params, "s", int)
    seed = _int(params, "seed", 0)
    control = params.get("control")
    prime_power(q)
    scn = hermitian_scenario(q, s, seed)
    C = scn.curve
    rec = {"params": to_record(scn.params), "curve": curve_record(C),
           "points": to_record(list(scn.points)),
           "groups": [to_record(G) for G in scn.groups],
           "generators": {str(k): to_record(F) for k, F in scn.generators.items()},
           "Phi": to_record(scn.Phi), "Psi": to_record(scn.Psi),
           "swaps": list(scn.swaps),
           "power_identity": all(ok for _, ok in scn.power_identity)}
    if control in (None, "wrong-g"):
        rep = scn.report
    elif control == "b":
        G1, G2, G3 = scn.groups
        rep = check_outer_criterion(C, (G1, G1, G3), scn.points, scn.generators)
    elif control == "d":
        G1, G2, G3 = scn.groups
        Q1, Q2, Q3 = scn.points
        gamma = next(h for h in G1 if not h.is_identity())
        from .projective import apply

        rep = check_outer_criterion(C, (G3, G1, G2), (Q1, Q3, apply(gamma, Q3)))
    else:
        raise ScenarioFormatError(f"field 'params.control' must be one of 'b', 'd', 'wrong-g', got {control!r}")
    rec["criterion"] = criterion_record(rep)
    verdict = rep.verdict
    if control in ("b", "d"):
        return rec, verdict
    if params.get("model", True):
        if control == "wrong-g":
            model = wrong_g_model(scn)
        else:
            model = scn.model(ext_bound=opts.ext_bound)
        rec["model"] = model_record(model)
        if params.get("verify", True):
            ver = verify_model_galois(model)
            rec["verification"] = verification_record(ver)
            if not ver.ok:
                verdict = FAIL
        if model.image_degree != model.expected_degree:
            verdict = FAIL
    return rec, verdict


def _criterion_inputs(params):
    ctx = _field(params)
    C = _curve(params, ctx)
    pts = _points(params, "points", ctx)
    if len(pts) != 3:
        raise ScenarioFormatError(f"field 'params.points' needs 3 points, got {len(pts)}")
    return ctx, C, pts


def run_outer(params, opts):
    ctx, C, pts = _criterion_inputs(params)
    groups = _groups(params, ctx)
    gens = _functions(params, ctx)
    rep = check_outer_criterion(C, groups, pts, gens)
    rec = {"curve": curve_record(C), "points": to_record(list(pts)),
           "groups": [to_record(G) for G in groups], "criterion": criterion_record(rep)}
    verdict = rep.verdict
    if rep.passed and gens and params.get("model", False):
        model = build_plane_model(C, groups, pts, gens[1], gens[2], ext_bound=opts.ext_bound)
        ver = verify_model_galois(model)
        rec["model"] = model_record(model)
        rec["verification"] = verification_record(ver)
        verdict = PASS if ver.ok else FAIL
    return rec, verdict


def run_inner(params, opts):
    ctx, C, pts = _criterion_inputs(params)
    if "groups" in params:
        groups = _groups(params, ctx)
    else:
        groups = tuple(decomposition_group(C, P) for P in pts)
    gens = _functions(params, ctx) or inner_functions(*pts)
    rep = check_inner_criterion(C, groups, pts, gens)
    rec = {"curve": curve_record(C), "points": to_record(list(pts)),
           "groups": [to_record(G) for G in groups], "criterion": criterion_record(rep)}
    verdict = rep.verdict
    if rep.passed and params.get("model", True):
        model = build_plane_model(C, groups, pts, gens[1], gens[2], kind="inner",
                                  ext_bound=opts.ext_bound)
        ver = verify_model_galois(model)
        rec["model"] = model_record(model)
        rec["verification"] = verification_record(ver)
        verdict = PASS if ver.ok else FAIL
    return rec, verdict


def run_fermat_check(params, opts):
    cap = opts.group_cap
    if "model" in params:
        m = params["model"]
        try:
            q, s = int(m["q"]), int(m["s"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioFormatError(f"field 'params.model' needs integers q and s: {exc}") from exc
        scn = hermitian_scenario(q, s, _int(params, "seed", 0))
        model = scn.model(ext_bound=opts.ext_bound)
        res = model_orbit_condition(model, cap)
        rec = {"mode": "model", "model": {"q": q, "s": s, "image_degree": model.image_degree,
                                          "image": curve_record(model.image)},
               "orbit": orbit_record(res)}
    else:
        ctx = _field(params)
        C = _curve(params, ctx)
        if "centers" in params:
            centers = _points(params, "centers", ctx)
        else:
            centers = tuple(ProjPoint(ctx, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        if len(centers) != 3:
            raise ScenarioFormatError(f"field 'params.centers' needs 3 points, got {len(centers)}")
        res = fermat_orbit_condition(C, *centers, cap=cap, ext_bound=opts.ext_bound)
        rec = {"mode": "curve", "curve": curve_record(C), "centers": to_record(list(centers)),
               "orbit": orbit_record(res)}
    rec["holds"] = res.holds
    rec["hypothesis"] = res.hypothesis
    return rec, PASS if res.holds else FAIL


def run_scan(params, opts):
    ctx = _field(params)
    C = _curve(params, ctx)
    which = params.get("candidates", "all")
    cap = _int(params, "scan_cap", _config.SCAN_CAP)
    if ctx.q > cap:
        raise CapExceeded(f"{ctx} exceeds the scan cap {cap}; partial results refused")
    pts = plane_points(ctx)
    if which == "inner":
        pts = [P for P in pts if C.contains(P)]
    elif which == "outer":
        pts = [P for P in pts if not C.contains(P)]
    elif which != "all":
        raise ScenarioFormatError(f"field 'params.candidates' must be all, inner or outer, got {which!r}")
    reports = scan_galois_points(C, pts)
    summary = census_summary(reports)
    rec = {"curve": curve_record(C), "candidates": which, "scanned": len(reports),
           "summary": summary,
           "galois_points": [triple_record(r.center) for r in reports if r.is_galois],
           "reports": [galois_record(r) for r in reports]}
    return rec, PASS


WORKFLOWS = {"hermitian": run_hermitian, "outer-criterion": run_outer,
             "inner-criterion": run_inner, "fermat-check": run_fermat_check, "scan": run_scan}


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------

def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".galoispts-", suffix=".tmp", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render(report):
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def execute(scenario, opts):
    """Run a validated scenario; returns (report dict, exit status)."""
    params = dict(scenario["params"])
    if opts.seed is not None:
        params["seed"] = opts.seed
    header = {"tool": {"name": "galoispts", "version": tool_version()},
              "format": FORMAT_VERSION, "command": scenario["command"], "params": params,
              "options": {"ext_bound": opts.ext_bound, "group_cap": opts.group_cap}}
    try:
        result, verdict = WORKFLOWS[scenario["command"]](params, opts)
    except (CapExceeded, GroupTooLarge) as exc:
        return {**header, "verdict": UNVERIFIED, "error": {"kind": "cap", "message": str(exc)}}, 2
    except ScenarioFormatError as exc:
        return {**header, "verdict": UNVERIFIED, "error": {"kind": "format", "message": str(exc)}}, 2
    except (ScenarioError, CurveError, FieldError, ValueError) as exc:
        return {**header, "verdict": UNVERIFIED,
                "error": {"kind": type(exc).__name__, "message": str(exc)}}, 2
    return {**header, "verdict": verdict, "result": result}, EXIT[verdict]


def _emit(report, out):
    text = _render(report)
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _adhoc_scenario(args, command):
    if not args.curve or args.field is None:
        raise ScenarioFormatError(f"{command} needs --scenario or both --curve and --field")
    params = {"curve": args.curve, "field": args.field}
    if command == "scan" and args.candidates:
        params["candidates"] = args.candidates
    return {"version": FORMAT_VERSION, "command": command, "params": params}


def build_parser():
    ap = argparse.ArgumentParser(prog="galoispts",
                                 description="Verify Galois-point criteria on plane curves over finite fields.")
    ap.add_argument("--version", action="version", version=f"galoispts {tool_version()}")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name, help_ in (("run", "run a scenario file"),
                        ("scan", "census of Galois points of a curve"),
                        ("fermat-check", "orbit condition at three centers")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--scenario", metavar="PATH")
        p.add_argument("--out", metavar="PATH", help="report path (stdout when omitted)")
        p.add_argument("--ext-bound", type=int, metavar="N", dest="ext_bound",
                       help="largest extension degree tried when splitting or sampling")
        p.add_argument("--group-cap", type=int, metavar="N", dest="group_cap",
                       help="bound on group closures")
        p.add_argument("--seed", type=int, metavar="N")
        if name != "run":
            p.add_argument("--curve", metavar="KIND:N", help="e.g. fermat:4 or hermitian:2")
            p.add_argument("--field", metavar="ORDER", help="e.g. 13, 4 or 2^4")
        if name == "scan":
            p.add_argument("--candidates", choices=("all", "inner", "outer"))
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.group_cap is not None:
        _config.GROUP_CAP = args.group_cap
    try:
        if args.scenario:
            scenario = load_scenario(args.scenario)
            if args.cmd != "run" and scenario["command"] != args.cmd:
                raise ScenarioFormatError(
                    f"{args.scenario}: command {scenario['command']!r} does not match subcommand {args.cmd!r}")
        elif args.cmd == "run":
            raise ScenarioFormatError("run needs --scenario PATH")
        else:
            scenario = _adhoc_scenario(args, args.cmd)
    except ScenarioFormatError as exc:
        print(f"galoispts: error: {exc}", file=sys.stderr)
        return 2
    report, status = execute(scenario, args)
    _emit(report, args.out)
    if "error" in report:
        print(f"galoispts: error: {report['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
