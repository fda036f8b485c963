"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid model, 3 computation
refused because a precondition fails.  Errors are written to stderr as
one JSON object.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import sys

from .algebra import BundleSpec, parse_tensor_form
from .deformed import (NonIntegrablePoint, complete_point, deformed_cohomology_dim,
                       rebigrade_crosscheck)
from .extension import canonical_deformation, vt_analysis
from .hodge import cohomology_dim, harmonic_basis
from .identities import DEFAULT_CASES, run_identity_suite
from .kuranishi import DEFAULT_ORDER, beltrami_series, solve_mc
from .model import ModelError, derive_brackets, validate_model
from .models import ModelValidationError, model_to_dict, resolve_model
from .scalars import ParseError, parse_gauss
from .special import HypothesisError, cy_deformation, kahler_deformation

__all__ = ["main", "ORDER_ENV", "PRESETS"]

ORDER_ENV = "DOLBEAULT_DEFORM_ORDER"

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_REFUSED = 0, 1, 2, 3

_H = "1/2"
# representative points of the strata tabulated for each model
PRESETS = {
    "iwasawa": {
        ("O^2", 0): [{}, {"t11": _H}, {"t11": _H, "t22": _H}],
        ("O^1", 1): [{"t31": _H}, {"t11": _H}, {"t11": _H, "t22": _H}],
        None: [{}, {"t31": _H}, {"t11": _H}, {"t11": _H, "t22": _H}],
    },
    "nakamura_iii_3b": {
        None: [{}, {"t22": _H}, {"t21": _H}, {"t11": _H}, {"t12": _H}],
    },
    "torus": {
        None: [{}, {"t11": _H}, {"t11": _H, "t22": _H}],
    },
}


class UsageError(Exception):
    pass


class Refused(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_order():
    raw = os.environ.get(ORDER_ENV)
    if raw is None or raw == "":
        return DEFAULT_ORDER
    try:
        v = int(raw)
    except ValueError:
        raise UsageError("%s must be a positive integer" % ORDER_ENV)
    if v < 1:
        raise UsageError("%s must be a positive integer" % ORDER_ENV)
    return v


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "md"), default=argparse.SUPPRESS)
    common.add_argument("--order", type=_positive, default=argparse.SUPPRESS)

    p = _Parser(prog="dolbeault-deform", parents=[common],
                description="Exact deformations of Dolbeault classes on invariant models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("validate", parents=[common], help="check a model")
    s.add_argument("model")

    s = sub.add_parser("mc", parents=[common], help="solve the Maurer-Cartan equation")
    s.add_argument("--model", required=True)

    s = sub.add_parser("deform", parents=[common], help="canonical deformation of a class")
    s.add_argument("--model", required=True)
    s.add_argument("--bundle", required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--method", choices=("generic", "kahler", "cy"), default="generic")

    s = sub.add_parser("jump", parents=[common], help="V_t / ker f_t table")
    s.add_argument("--model", required=True)
    s.add_argument("--bundle", required=True)
    s.add_argument("--q", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--at", action="append")
    g.add_argument("--preset", choices=("paper-strata",))

    s = sub.add_parser("cohomology", parents=[common], help="deformed cohomology dimension")
    s.add_argument("--model", required=True)
    s.add_argument("--bundle", required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--at", default="")
    s.add_argument("--crosscheck", action="store_true")

    s = sub.add_parser("identities", parents=[common], help="seeded identity suite")
    s.add_argument("--model", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=_positive, default=DEFAULT_CASES)
    return p


# ------------------------------------------------------------- helpers

def _model(name, validate=True):
    m = resolve_model(name, validate)
    return m


def _digest(m):
    text = json.dumps(model_to_dict(m), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _bundle(text, m):
    try:
        return BundleSpec.parse(text, m.n)
    except ValueError as e:
        raise UsageError("bad bundle %r: %s" % (text, e))


def _check_q(q, m):
    if not 0 <= q <= m.n:
        raise UsageError("q must lie between 0 and %d" % m.n)


def parse_point(text, params):
    """``t11=1/2,t22=i`` -> exact point; ``0`` or empty is the origin."""
    out = {}
    text = (text or "").strip()
    if text in ("", "0"):
        return complete_point(params, {})
    for item in text.split(","):
        name, sep, val = item.partition("=")
        name = name.strip()
        if not sep:
            raise UsageError("point entries look like name=value, got %r" % item)
        if name not in params:
            raise UsageError("unknown parameter %r" % name)
        try:
            out[name] = parse_gauss(val.strip())
        except ParseError as e:
            raise UsageError("bad value for %s: %s" % (name, e))
    return complete_point(params, out)


def _point_str(pt):
    nz = ["%s=%s" % (k, v.to_string()) for k, v in sorted(pt.items()) if v]
    return ",".join(nz) or "0"


def preset_points(m, bundle, q):
    key = "torus" if m.name.startswith("torus") else m.name
    table = PRESETS.get(key)
    if table is None:
        raise UsageError("no preset strata for model %r" % m.name)
    pts = table.get((bundle.to_string(), q), table[None])
    return [{k: parse_gauss(v) for k, v in p.items()} for p in pts]


def _series_caveats(m, series):
    out = []
    if m.asserted_mc or not series.mc_certified:
        out.append("asserted-MC")
    if not series.terminated:
        out.append("truncated-formal")
    return out


# ------------------------------------------------------------- commands

def cmd_validate(args, order):
    try:
        m = _model(args.model, validate=False)
    except ModelError as e:
        return {"valid": False, "diagnostics": [str(e)]}, [], None, EXIT_MODEL
    diags = validate_model(m)
    if not diags:
        try:
            derive_brackets(m)
        except ModelError as e:
            diags.append(str(e))
    payload = {"valid": not diags, "diagnostics": diags, "dim": m.n,
               "fb_mode": m.fb_mode, "conjugation_closed": m.conjugation_closed,
               "asserted_mc": m.asserted_mc, "params": list(m.params)}
    table = [{"diagnostic": d} for d in diags] or [{"diagnostic": "ok"}]
    return payload, [], (m, table), EXIT_OK if not diags else EXIT_MODEL


def cmd_mc(args, order):
    m = _model(args.model)
    series = solve_mc(m, order)
    payload = {
        "params": list(series.params),
        "phi": series.total().to_string(),
        "series": {str(k): p.to_string() for k, p in series.pieces.items()},
        "terminated": series.terminated,
        "residual": {str(k): r.to_string() for k, r in series.mc_residual.items()},
        "residual_zero": not any(series.mc_residual.values()),
        "obstruction_polys": [p.to_string() for p in series.kuranishi_obstructions],
        "mc_certified": series.mc_certified,
    }
    if m.beltrami is not None:
        payload["matches_model_beltrami"] = series.total() == m.beltrami
    table = [{"degree": k, "piece": p.to_string()} for k, p in series.pieces.items()]
    return payload, _series_caveats(m, series), (m, table), EXIT_OK


def cmd_deform(args, order):
    m = _model(args.model)
    bundle = _bundle(args.bundle, m)
    _check_q(args.q, m)
    try:
        sigma0 = parse_tensor_form(args.cls, m, bundle)
    except (ValueError, ParseError, ModelError) as e:
        raise UsageError("bad class expression: %s" % e)
    if sigma0 and sigma0.q != args.q:
        raise UsageError("class has degree %s, expected q = %d" % (sigma0.q, args.q))
    series = beltrami_series(m, order)
    if args.method == "kahler":
        if bundle.factors and (len(bundle.factors) > 1 or bundle.factors[0] == "T"):
            raise Refused("the Kaehler recursion takes O^p-valued classes")
        rep = kahler_deformation(sigma0, series, order)
    elif args.method == "cy":
        if bundle.factors != ("T",):
            raise Refused("the Calabi-Yau recursion takes T-valued classes")
        rep = cy_deformation(sigma0, series, None, order)
    else:
        rep = canonical_deformation(sigma0, series, order)
    payload = rep.to_dict()
    caveats = sorted(set(rep.caveats()) | set(_series_caveats(m, series)))
    payload["caveats"] = caveats
    if hasattr(rep, "agrees_with_generic"):
        payload["agrees_with_generic"] = rep.agrees_with_generic
    table = [{"degree": k, "piece": p.to_string()} for k, p in rep.pieces.items()]
    table += [{"degree": "obstruction", "piece": p.to_string()} for p in rep.obstruction_polys]
    return payload, caveats, (m, table), EXIT_OK


def cmd_jump(args, order):
    m = _model(args.model)
    bundle = _bundle(args.bundle, m)
    _check_q(args.q, m)
    series = beltrami_series(m, order)
    if args.preset:
        points = preset_points(m, bundle, args.q)
    else:
        points = [parse_point(a, series.params) for a in args.at]
    basis = harmonic_basis(m, bundle, args.q)
    if not basis:
        raise Refused("H^{0,%d}(%s) = 0; nothing to deform" % (args.q, bundle.to_string()))
    an = vt_analysis(basis, series, points, order)
    payload = an.to_dict()
    caveats = _series_caveats(m, series)
    if not all(r.terminated for r in an.reports) and "truncated-formal" not in caveats:
        caveats.append("truncated-formal")
    table = [{"point": _point_str(r.point), "dim_V_t": r.dim_vt, "dim_ker_f_t": r.dim_ker_ft,
              "h": r.h, "rank_T": r.rank_T, "certified": r.certified} for r in an.rows]
    return payload, caveats, (m, table), EXIT_OK


def cmd_cohomology(args, order):
    m = _model(args.model)
    bundle = _bundle(args.bundle, m)
    _check_q(args.q, m)
    series = beltrami_series(m, order)
    pt = parse_point(args.at, series.params)
    try:
        dim = deformed_cohomology_dim(m, bundle, args.q, pt, series)
    except NonIntegrablePoint as e:
        raise Refused(str(e))
    payload = {"bundle": bundle.to_string(), "q": args.q, "point": _point_str(pt),
               "dim": dim, "dim_at_origin": cohomology_dim(m, bundle, args.q)}
    row = {"point": _point_str(pt), "dim": dim, "dim_at_origin": payload["dim_at_origin"]}
    if args.crosscheck:
        if not m.conjugation_closed:
            raise Refused("re-bigrading needs a frame closed under conjugation")
        cc = rebigrade_crosscheck(m, bundle, args.q, pt, series)
        payload["crosscheck"] = cc.to_dict()
        row.update({"dim_via_rebigrading": cc.dim_t, "equal": cc.equal,
                    "pointwise_equivalence": cc.pointwise})
    return payload, _series_caveats(m, series), (m, [row]), EXIT_OK


def cmd_identities(args, order):
    m = _model(args.model)
    results = run_identity_suite(m, args.seed, args.cases)
    payload = {"seed": args.seed, "cases_per_identity": args.cases,
               "results": [r.to_dict() for r in results],
               "all_passed": all(r.ok for r in results)}
    table = [{"identity": r.name, "cases": r.cases, "failures": r.failures,
              "status": "pass" if r.passed else ("skip" if r.ok else "FAIL")} for r in results]
    code = EXIT_OK if payload["all_passed"] else EXIT_REFUSED
    return payload, [], (m, table), code


COMMANDS = {"validate": cmd_validate, "mc": cmd_mc, "deform": cmd_deform, "jump": cmd_jump,
            "cohomology": cmd_cohomology, "identities": cmd_identities}


# ------------------------------------------------------------- output

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(report, table, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    cols = []
    for row in table:
        for k in row:
            if k not in cols:
                cols.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in table:
            w.writerow([_cell(row.get(c)) for c in cols])
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for row in table:
        lines.append("| " + " | ".join(_cell(row.get(c)).replace("|", "\\|") for c in cols) + " |")
    lines.append("")
    lines.append("caveats: " + (", ".join(report["caveats"]) or "none"))
    return "\n".join(lines) + "\n"


def _error(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code},
                                sort_keys=True) + "\n")
    return code


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        order = getattr(args, "order", None) or default_order()
        fmt = getattr(args, "format", "json")
        payload, caveats, extra, code = COMMANDS[args.command](args, order)
    except UsageError as e:
        return _error("usage", str(e), EXIT_USAGE)
    except ModelValidationError as e:
        return _error("invalid-model", str(e), EXIT_MODEL)
    except ModelError as e:
        return _error("invalid-model", str(e), EXIT_MODEL)
    except (Refused, HypothesisError, NonIntegrablePoint) as e:
        return _error("refused", str(e), EXIT_REFUSED)
    m, table = extra if extra else (None, [])
    report = {
        "command": argv,
        "model": {"name": m.name, "digest": _digest(m)} if m is not None else None,
        "order": order,
        "format": fmt,
        "results": payload,
        "caveats": caveats,
    }
    sys.stdout.write(render(report, table, fmt))
    if code == EXIT_MODEL:
        return _error("invalid-model", "; ".join(payload.get("diagnostics", [])), code)
    if code == EXIT_REFUSED:
        return _error("check-failed", "identity checks failed", code)
    return code


if __name__ == "__main__":
    sys.exit(main())
