"""Command-line interface: ``pgl2atlas <verb> --q p^r ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import construct as cons
from .addsub import EmptyFamilyError, parse_gamma
from .atlas import (
    EXTENDED_ORACLE_CAP,
    ORACLE_CAP,
    OracleCapExceeded,
    brute_force_atlas,
    predicted_atlas,
    verify,
)
from .gf import FieldError, FieldSpec, parse_field
from .groups import are_conjugate, closure, order_profile, recognize
from .pgl2 import SingularMatrixError, format_matrix, format_point, parse_matrix, pgl2


class UsageError(Exception):
    pass


def _field(text: str) -> FieldSpec:
    try:
        return parse_field(text)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _header(F: FieldSpec) -> dict:
    return {"field": str(F), "p": F.p, "r": F.r, "q": F.q, "modulus": list(F.modulus)}


def _header_text(F: FieldSpec) -> str:
    return f"GF({F}) q={F.q} modulus={list(F.modulus)}"


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _matrices(F: FieldSpec, text: str):
    G = pgl2(F)
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            out.append(G.canonicalize(parse_matrix(chunk)))
        except (ValueError, FieldError) as exc:
            raise UsageError(str(exc)) from None
    return out


# -- verbs -------------------------------------------------------------------------


def cmd_field_info(args) -> int:
    F = _field(args.q)
    g = F.primitive_element
    payload = {**_header(F), "primitive_element": g}
    _emit(args, payload, [_header_text(F), f"p={F.p} r={F.r}", f"primitive_element={g}"])
    return 0


def cmd_order(args) -> int:
    F = _field(args.q)
    G = pgl2(F)
    (m,) = _matrices(F, args.matrix) or [None]
    if m is None:
        raise UsageError("--matrix is empty")
    n = G.order(m)
    payload = {**_header(F), "matrix": format_matrix(m), "order": n, "det_class": G.det_class(m)}
    lines = [_header_text(F), f"matrix={format_matrix(m)}", f"det_class={G.det_class(m)}", f"order={n}"]
    if m != G.identity:
        fq, fq2 = G.fixed_points(m)
        payload["fixed_points"] = [format_point(z) for z in fq]
        payload["fixed_points_quadratic"] = [format_point(z) for z in fq2]
        lines.insert(3, "fixed_points=" + ",".join(format_point(z) for z in fq))
    _emit(args, payload, lines)
    return 0


def _canonical_conjugate(H):
    try:
        atlas = predicted_atlas(H.field)
    except (FieldError, ValueError):
        return None
    for d in atlas:
        if d.order != H.order:
            continue
        u = are_conjugate(d.representative, H)
        if u is not None:
            return {"label": d.label.name, "witness": format_matrix(u)}
    return None


def cmd_classify(args) -> int:
    F = _field(args.q)
    gens = _matrices(F, args.gens)
    H = closure(F, gens)
    label = recognize(H)
    canon = _canonical_conjugate(H)
    payload = {
        **_header(F),
        "generators": [format_matrix(g) for g in gens],
        "order": H.order,
        "profile": {str(k): v for k, v in order_profile(H).items()},
        "label": label.name,
        "aliases": list(label.aliases),
        "canonical_conjugate_of": canon,
    }
    lines = [
        _header_text(F),
        f"order={H.order}",
        "profile=" + " ".join(f"{k}:{v}" for k, v in order_profile(H).items()),
        f"label={label.name}",
        "aliases=" + ",".join(label.aliases),
        "canonical_conjugate_of=" + (f"{canon['label']} witness={canon['witness']}" if canon else "none"),
    ]
    _emit(args, payload, lines)
    return 0


def cmd_construct(args) -> int:
    F = _field(args.q)
    gamma = parse_gamma(F, args.gamma) if args.gamma is not None else None
    try:
        H = cons.build(F, args.family, n=args.n, gamma=gamma, tau=args.tau, s=args.s, route=args.route)
    except (EmptyFamilyError, FieldError) as exc:
        raise UsageError(str(exc)) from None
    label = recognize(H)
    payload = {
        **_header(F),
        "family": args.family,
        "generators": [format_matrix(g) for g in H.generators],
        "order": H.order,
        "label": label.name,
        "aliases": list(label.aliases),
    }
    lines = [
        _header_text(F),
        f"family={args.family} order={H.order} label={label.name}",
        "generators=" + ";".join(format_matrix(g) for g in H.generators),
    ]
    _emit(args, payload, lines)
    return 0


def _class_line(d) -> str:
    aliases = f" (= {', '.join(d.label.aliases)})" if d.label.aliases else ""
    gens = ";".join(format_matrix(g) for g in d.representative.generators) or "-"
    return f"  {d.label.name}{aliases}  order={d.order}  class_size={d.class_size}  gens={gens}"


def cmd_atlas(args) -> int:
    F = _field(args.q)
    cap = EXTENDED_ORACLE_CAP if args.extended_oracle else ORACLE_CAP
    try:
        if args.verify:
            report = verify(F, cap)
            classes = [pd for pd, _ in report.matched] + report.brute_only
            classes.sort(key=lambda d: (d.order, d.label.name, d.representative.codes.tolist()))
        elif args.brute:
            report = None
            classes = list(brute_force_atlas(F, cap))
        else:
            report = None
            classes = list(predicted_atlas(F))
    except OracleCapExceeded as exc:
        raise UsageError(f"{exc}; pass --extended-oracle for q = 11") from None
    payload = {**_header(F), "classes": [d.to_json() for d in classes]}
    source = "verified" if args.verify else ("brute_force" if args.brute else "predicted")
    lines = [_header_text(F), f"{len(classes)} conjugacy classes of subgroups ({source})"]
    lines += [_class_line(d) for d in classes]
    status = 0
    if report is not None:
        payload["verification"] = report.to_json()
        lines.append(
            f"verification: matched={len(report.matched)} predicted_only={len(report.predicted_only)} "
            f"brute_only={len(report.brute_only)} {'OK' if report.ok else 'FAILED'}"
        )
        lines += [f"  residual: {n}" for n in report.residual_notes]
        lines += [f"  unexplained brute-only class: {d.label.name}" for d in report.unexplained]
        lines += [f"  predicted-only class: {d.label.name}" for d in report.predicted_only]
        status = 0 if report.ok else 1
    _emit(args, payload, lines)
    return status


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgl2atlas", description="Finite subgroups of PGL2 over finite fields.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--q", required=True, help='field as "p^r", e.g. 3^2')
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    verb("field-info", cmd_field_info, "modulus and primitive element")
    p = verb("order", cmd_order, "order of a projective matrix")
    p.add_argument("--matrix", required=True, help="[[a,b],[c,d]] with integer-encoded entries")
    p = verb("classify", cmd_classify, "recognize the subgroup generated by matrices")
    p.add_argument("--gens", required=True, help='matrices separated by ";"')
    p = verb("construct", cmd_construct, "build a subgroup from a family")
    p.add_argument("--family", required=True, choices=cons.FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", help="comma-separated basis encodings of an additive subgroup")
    p.add_argument("--tau", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--route", choices=("explicit", "search"), default="explicit")
    p = verb("atlas", cmd_atlas, "conjugacy classes of subgroups")
    p.add_argument("--brute", action="store_true", help="use the brute-force oracle")
    p.add_argument("--verify", action="store_true", help="compare prediction with the oracle")
    p.add_argument("--extended-oracle", action="store_true", help=f"raise the oracle cap to {EXTENDED_ORACLE_CAP}")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SingularMatrixError, ValueError) as exc:
        parser.error(str(exc))
    return 2  # pragma: no cover


run = main


if __name__ == "__main__":
    sys.exit(main())
