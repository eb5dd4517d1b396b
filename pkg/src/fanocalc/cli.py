"""Command-line front end.

Exit codes: 0 success, 1 domain error (unknown family, bad expression,
failed verification), 2 usage error (bad flags or malformed filter values).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import catalog, classify, ring
from .errors import FanoCalcError
from .parser import parse_family_id


def _fmt(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_int_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def cmd_deg(args) -> int:
    model = ring.model_from_recipe(args.recipe)
    value = model.evaluate(args.expr)
    if args.json:
        print(json.dumps({"value": _fmt(value)}))
    else:
        print(_fmt(value))
    return 0


def _record_payload(rec: catalog.FanoFamilyRecord, result) -> dict:
    return {
        "id": str(rec.id),
        "rho": rec.rho,
        "index": rec.index,
        "epsilon": "open" if rec.eps_status == "open" else _fmt(rec.epsilon),
        "eps_status": rec.eps_status,
        "dp_degrees": sorted(rec.dp_degrees),
        "non_bpf": rec.non_bpf,
        "clubsuit": rec.clubsuit,
        "ci_center": rec.ci_center,
        "ell": rec.ell,
        "recomputed": result.recomputed,
        "description": rec.description,
    }


def cmd_family(args) -> int:
    rec = catalog.get_family(args.id)
    result = classify.epsilon_of_family(rec.id)
    payload = _record_payload(rec, result)
    if args.json:
        print(json.dumps(payload))
        return 0
    dp = "{" + ",".join(str(d) for d in sorted(rec.dp_degrees)) + "}"
    opt = lambda v: "?" if v is None else str(v).lower()
    print(f"family {rec.id}: {rec.description}")
    print(f"  epsilon={payload['epsilon']} (status={rec.eps_status}, recomputed={str(result.recomputed).lower()})")
    print(f"  rho={rec.rho} index={opt(rec.index)} dp={dp} non_bpf={str(rec.non_bpf).lower()}")
    print(f"  clubsuit={opt(rec.clubsuit)} ci_center={opt(rec.ci_center)} ell={opt(rec.ell)}")
    return 0


def cmd_classify(args) -> int:
    fid = parse_family_id(args.id)
    rec = catalog.get_family(fid)
    real = catalog.realize_recipe(fid)
    s = classify.Splitting(
        real.d1,
        real.d2,
        free1=real.free[0],
        free2=real.free[1],
        nef_big_second=real.nef_big_second,
    )
    outcome = classify.classify_splitting(s, ell_hint=rec.ell)
    if args.json:
        print(json.dumps({
            "id": str(fid),
            "pencil_side": outcome.pencil_side,
            "fiber_degree": outcome.fiber_degree,
            "epsilon": _fmt(outcome.epsilon),
            "notes": list(outcome.notes),
        }))
        return 0
    print(f"family {fid}")
    print(f"  splitting: D1={real.d1}  D2={real.d2}")
    print(f"  pencil_side={outcome.pencil_side} fiber_degree={outcome.fiber_degree}")
    print(f"  epsilon={_fmt(outcome.epsilon)}")
    for note in outcome.notes:
        print(f"  rule: {note}")
    return 0


def cmd_verify(args) -> int:
    report = classify.verify_paper()
    if args.only:
        report = report.section(args.only)
    if args.json:
        print(json.dumps({
            "ok": report.ok,
            "checks": [
                {
                    "section": c.section,
                    "name": c.name,
                    "expected": str(c.expected),
                    "actual": str(c.actual),
                    "passed": c.passed,
                }
                for c in report.checks
            ],
        }))
    else:
        print(report.render())
    return 0 if report.ok else 1


def cmd_list(args) -> int:
    records = catalog.list_families(
        epsilon=args.epsilon, rho=args.rho, dp_degree=args.dp
    )
    if args.json:
        rows = []
        for rec in records:
            eps = "open" if rec.eps_status == "open" else _fmt(rec.epsilon)
            rows.append({"id": str(rec.id), "epsilon": eps,
                         "dp_degrees": sorted(rec.dp_degrees),
                         "description": rec.description})
        print(json.dumps({"count": len(rows), "families": rows}))
        return 0
    for rec in records:
        eps = "open" if rec.eps_status == "open" else _fmt(rec.epsilon)
        dp = ",".join(str(d) for d in sorted(rec.dp_degrees)) or "-"
        print(f"{rec.id}\t{eps}\t{dp}\t{rec.description}")
    print(f"count {len(records)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanocalc",
        description="Exact intersection numbers and anticanonical Seshadri "
        "constants for Fano threefolds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("deg", help="evaluate an intersection number on a model")
    p.add_argument("recipe", help='model recipe, e.g. "blowup_point(P(3),count=1)"')
    p.add_argument("expr", help='class expression, e.g. "(2L-E)^3"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_deg)

    p = sub.add_parser("family", help="show one catalog record")
    p.add_argument("id", help="family identifier rho.N, e.g. 3.2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("classify", help="run the splitting classifier on a curated recipe")
    p.add_argument("id", help="family identifier rho.N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="recompute published values and report")
    p.add_argument("--only", choices=classify.VERIFY_SECTIONS,
                   help="restrict to one section of the report")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list", help="list catalog families with optional filters")
    p.add_argument("--epsilon", type=_rational_arg, default=None,
                   help='filter by Seshadri constant, e.g. 4/3')
    p.add_argument("--dp", type=_positive_int_arg, default=None,
                   help="filter by del Pezzo fibration degree")
    p.add_argument("--rho", type=_positive_int_arg, default=None,
                   help="filter by Picard rank")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FanoCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
