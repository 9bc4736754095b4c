"""Command-line front end: JSON in, JSON out.

Commands
  periods     period matrix of a genus-2 curve (number-field model or raw sextic)
  invariants  absolute Igusa-Clebsch invariants from a period matrix
              (optionally reconstructing the exact tuple over a number field)
  isogeny     search for integer matrices (Y, Z) relating two period lattices
  linv        p-adic L-invariant of a Hecke-equivariant lattice
  recognize   recognize a p-adic value as a number-field element
  roots       roots of a polynomial over the p-adic tower

Exit codes: 0 success, 1 mathematical not-found/failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import PadicError, SchemaError
from .igusa import discriminant_search, invariants_from_halfperiods
from .isogeny import PadicLattice, kadziela_find
from .linvariant import HeckeAction, l_invariant
from .mumford import (PeriodMatrix, curve_periods, halfperiods_from_periods,
                      periods_from_matrix, sextic_from_model)
from .numfield import NumberField, build_embedding, recognize
from .padic import PadicElement, PadicPoly, TowerContext, poly_roots


# -- schema-checked JSON access ------------------------------------------------

def _need(data, key, ptr, kind=None):
    if not isinstance(data, dict):
        raise SchemaError("expected an object", ptr)
    if key not in data:
        raise SchemaError("missing key %r" % key, "%s/%s" % (ptr, key))
    val = data[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError("wrong type for %r" % key, "%s/%s" % (ptr, key))
    return val


def _load_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError("cannot read %s: %s" % (path, exc), "")
    except ValueError as exc:
        raise SchemaError("invalid JSON in %s: %s" % (path, exc), "")


def _ctx_from(data, ptr, prec=None):
    p = _need(data, "p", ptr, int)
    level = data.get("level", "base")
    u = data.get("u")
    n = prec if prec is not None else data.get("prec", 32)
    try:
        return TowerContext(p, u, level, n)
    except ValueError as exc:
        raise SchemaError(str(exc), ptr)


def _elem_from(ctx, data, ptr):
    if isinstance(data, int):
        return ctx.from_int(data)
    if not isinstance(data, list):
        raise SchemaError("expected an element (coord list or int)", ptr)
    for i, entry in enumerate(data):
        for key in ("v", "unit", "prec", "coord"):
            _need(entry, key, "%s/%d" % (ptr, i))
    try:
        return PadicElement.from_json(ctx, data)
    except (PadicError, ValueError) as exc:
        raise SchemaError(str(exc), ptr)


def _field_from(data, ptr):
    minpoly = _need(data, "minpoly", ptr, list)
    try:
        return NumberField.from_json(data)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), "%s/minpoly" % ptr)


def _nf_elem(field, data, ptr):
    if not isinstance(data, list):
        raise SchemaError("expected number-field element coefficients", ptr)
    try:
        return field.element([Fraction(str(c)) for c in data])
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc), ptr)


def _embedding_from(data, field, ptr, prec=None):
    emb_data = _need(data, "embedding", ptr)
    pdata = _need(emb_data, "p", "%s/embedding" % ptr)
    if isinstance(pdata, int):
        pdata = {"p": pdata}
    ctx = _ctx_from(pdata, "%s/embedding/p" % ptr, prec)
    residue = _need(emb_data, "residue", "%s/embedding" % ptr, int)
    return build_embedding(field, ctx, residue)


def _lattice_from(data, ptr, prec=None):
    ctx = _ctx_from(_need(data, "ctx", ptr), "%s/ctx" % ptr, prec)
    matrix = _need(data, "matrix", ptr, list)
    if len(matrix) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in matrix):
        raise SchemaError("matrix must be 2x2", "%s/matrix" % ptr)
    entries = [[_elem_from(ctx, matrix[i][j], "%s/matrix/%d/%d" % (ptr, i, j))
                for j in range(2)] for i in range(2)]
    try:
        return PadicLattice(entries)
    except PadicError as exc:
        raise SchemaError(str(exc), "%s/matrix" % ptr)


def _int_matrix(data, ptr):
    if (not isinstance(data, list) or len(data) != 2
            or any(not isinstance(r, list) or len(r) != 2 for r in data)
            or any(not isinstance(x, int) for r in data for x in r)):
        raise SchemaError("expected a 2x2 integer matrix", ptr)
    return [list(r) for r in data]


# -- output rendering ----------------------------------------------------------

def _base_p_digits(unit, p, n):
    digits = []
    u = unit
    for _ in range(n):
        digits.append(u % p)
        u //= p
    return ",".join(str(d) for d in reversed(digits))


def _render_elem(x):
    p = x.ctx.p
    out = {"coords": x.to_json(), "prec": str(x.abs_prec())}
    v = x.valuation()
    out["v"] = "inf" if v is None else str(v)
    if v is not None and x.is_base():
        cv, unit, n = x.coords["1"]
        out["unit_base10"] = str(unit)
        out["unit_base_p"] = _base_p_digits(unit, p, n - cv)
    return out


def _emit(result, out_path):
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


# -- commands ------------------------------------------------------------------

def _cmd_periods(args):
    data = _load_file(args.curve)
    prec = args.prec
    if "sextic" in data:
        ctx = _ctx_from(_need(data, "ctx", ""), "/ctx", prec)
        coeffs = [_elem_from(ctx, c, "/sextic/%d" % i)
                  for i, c in enumerate(_need(data, "sextic", "", list))]
        f = PadicPoly(ctx, coeffs)
    else:
        field = _field_from(_need(data, "field", ""), "/field")
        emb = _embedding_from(data, field, "", prec)
        model = _need(data, "model", "")
        h = [_nf_elem(field, c, "/model/h/%d" % i)
             for i, c in enumerate(_need(model, "h", "/model", list))]
        g = [_nf_elem(field, c, "/model/g/%d" % i)
             for i, c in enumerate(_need(model, "g", "/model", list))]
        f = sextic_from_model(emb, h, g)
    pm = curve_periods(f, seed_depth=args.seed_depth, target_prec=prec)
    return {
        "A": _render_elem(pm.A), "B": _render_elem(pm.B), "D": _render_elem(pm.D),
        "prec": str(min(x.abs_prec() for x in pm.as_tuple())),
    }


def _cmd_invariants(args):
    data = _load_file(args.matrix)
    ctx = _ctx_from(_need(data, "ctx", ""), "/ctx", args.prec)
    pm = PeriodMatrix(*[_elem_from(ctx, _need(data, k, ""), "/" + k)
                        for k in ("A", "B", "D")])
    qs = periods_from_matrix(pm)
    hp = halfperiods_from_periods(qs)
    ai = invariants_from_halfperiods(hp, args.prec)
    result = {k: _render_elem(getattr(ai, k)) for k in ("i1", "i2", "i3")}
    result["prec"] = str(min(x.abs_prec() for x in ai.as_tuple()))
    if args.search:
        cfg = _load_file(args.search)
        field = _field_from(_need(cfg, "field", ""), "/field")
        emb = _embedding_from(cfg, field, "", args.prec)
        unit = _nf_elem(field, _need(cfg, "unit", ""), "/unit")
        squares = [_nf_elem(field, c, "/fixed_squares/%d" % i)
                   for i, c in enumerate(_need(cfg, "fixed_squares", "", list))]
        a_range = tuple(_need(cfg, "a_range", "", list))
        b_range = tuple(_need(cfg, "b_range", "", list))
        ic = discriminant_search(ai, emb, unit, squares, a_range, b_range,
                                 cfg.get("height_bound", 10 ** 7),
                                 cfg.get("denom_bound", 10))
        result["exact"] = ic.to_json()
    return result


def _cmd_isogeny(args):
    V = _lattice_from(_load_file(args.lhs), "", args.prec)
    W = _lattice_from(_load_file(args.rhs), "", args.prec)
    res = kadziela_find(V, W, bound=args.bound)
    return res.to_json()


def _cmd_linv(args):
    data = _load_file(args.input)
    lat = _lattice_from(_need(data, "lattice", ""), "/lattice", args.prec)
    hecke_data = _need(data, "hecke", "")
    hecke = HeckeAction(_int_matrix(_need(hecke_data, "matrix", "/hecke"),
                                    "/hecke/matrix"))
    if "charpoly" in hecke_data:
        stated = tuple(_need(hecke_data, "charpoly", "/hecke", list))
        if tuple(stated) != hecke.charpoly():
            raise SchemaError("charpoly does not match the matrix", "/hecke/charpoly")
    res = l_invariant(lat, hecke)
    return {"a": _render_elem(res.a), "b": _render_elem(res.b),
            "convention": ",".join(res.conventions), "prec": str(res.prec)}


def _cmd_recognize(args):
    data = _load_file(args.input)
    field = _field_from(_need(data, "field", ""), "/field")
    emb = _embedding_from(data, field, "", args.prec)
    value = _elem_from(emb.ctx, _need(data, "value", ""), "/value")
    elt = recognize(value, emb,
                    data.get("height_bound", 10 ** 7), data.get("denom_bound", 10))
    return {"coeffs": [str(c) for c in elt.coeffs]}


def _cmd_roots(args):
    data = _load_file(args.poly)
    ctx = _ctx_from(_need(data, "ctx", ""), "/ctx", args.prec)
    coeffs = [_elem_from(ctx, c, "/coeffs/%d" % i)
              for i, c in enumerate(_need(data, "coeffs", "", list))]
    found = poly_roots(PadicPoly(ctx, coeffs))
    return {"roots": [{"root": _render_elem(r), "multiplicity": m}
                      for r, m in found]}


_COMMANDS = {
    "periods": _cmd_periods,
    "invariants": _cmd_invariants,
    "isogeny": _cmd_isogeny,
    "linv": _cmd_linv,
    "recognize": _cmd_recognize,
    "roots": _cmd_roots,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="padicperiods",
        description="p-adic period lattices of genus-2 Mumford curves")
    sub = parser.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--prec", type=int, default=None,
                        help="working precision in digits (>= 20)")
        sp.add_argument("--out", default=None, help="write result JSON here too")

    sp = sub.add_parser("periods", help="period matrix of a curve")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--seed-depth", type=int, default=3)
    common(sp)

    sp = sub.add_parser("invariants", help="absolute invariants of a period matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--search", default=None,
                    help="discriminant search configuration JSON")
    common(sp)

    sp = sub.add_parser("isogeny", help="find (Y, Z) with V^Y = ^Z W")
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--bound", type=int, default=64)
    common(sp)

    sp = sub.add_parser("linv", help="p-adic L-invariant of a lattice")
    sp.add_argument("--input", required=True)
    common(sp)

    sp = sub.add_parser("recognize", help="recognize a value over a number field")
    sp.add_argument("--input", required=True)
    common(sp)

    sp = sub.add_parser("roots", help="roots of a p-adic polynomial")
    sp.add_argument("--poly", required=True)
    common(sp)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not args.command:
        parser.print_help()
        return 2
    if args.command not in _COMMANDS:
        sys.stderr.write("unknown command: %s\n" % args.command)
        return 2
    if args.prec is not None and args.prec < 20:
        sys.stderr.write("--prec must be at least 20\n")
        return 2
    try:
        result = _COMMANDS[args.command](args)
    except SchemaError as exc:
        sys.stderr.write("input error at %s: %s\n" % (exc.pointer or "/", exc))
        return 2
    except PadicError as exc:
        _emit({"error": str(exc), "type": type(exc).__name__}, args.out)
        return 1
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
