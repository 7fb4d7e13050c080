"""Command-line entry point: ``ainftate COMMAND [options]``.

Exit status is 0 when every property check passes, 1 when one fails and 2 for
bad input (unreadable presentations, unknown flags, untrusted degrees).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Dict, List, Optional, Sequence

from .ainf import (
    LEFT,
    dualize_algebra,
    module_to_comodule,
    trivial_module,
    verify_algebra_relations,
    verify_coalgebra_relations,
    verify_comodule_relations,
    verify_module_relations,
)
from .bar import TruncationPolicy, borel, coborel
from .f2 import ChainComplex, DegreeError, TrustedRange
from .presentation import BUILTINS, builtin_example, dump_structure, parse_presentation
from .tate import NormError, dualizing_bimodule, tate_complex, twisted_borel, verify_dualizing_bimodule
from .trees import chamber_graph_is_cycle, strata, wall_adjacency

COMPLEX_COMMANDS = ("borel", "coborel", "twisted-borel", "tate", "les-check")


class UsageError(Exception):
    pass


def _degree_range(text: str) -> List[int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b with integers, got {text!r}") from None
    if not sep or a > b:
        raise argparse.ArgumentTypeError(f"expected a..b with a <= b, got {text!r}")
    return list(range(a, b + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ainftate", description="Borel, co-Borel, twisted Borel and Tate homology over F2.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    inputs = argparse.ArgumentParser(add_help=False)
    src = inputs.add_argument_group("input")
    src.add_argument("--example", choices=BUILTINS, help="built-in algebra with its augmentation-trivial module")
    src.add_argument("--algebra", metavar="FILE", help="algebra presentation (JSON)")
    src.add_argument("--module", metavar="FILE", help="left module presentation (JSON); brings its own algebra")

    output = argparse.ArgumentParser(add_help=False)
    out = output.add_argument_group("output")
    out.add_argument("--format", choices=("json", "csv"), default="json")
    out.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    out.add_argument("--timing", action="store_true", help="include wall-clock time (makes reports non-reproducible)")

    policy = argparse.ArgumentParser(add_help=False)
    pol = policy.add_argument_group("truncation")
    pol.add_argument("--kmax", type=int, default=4, help="maximum number of bar letters")
    pol.add_argument("--lmax", type=int, default=4, help="maximum number of cobar letters")
    pol.add_argument("--degrees", type=_degree_range, metavar="A..B",
                     help="degrees to report (write --degrees=-3..2 for negative A); must lie in the trusted range")
    pol.add_argument("--check-d2", dest="check_d2", action=argparse.BooleanOptionalAction, default=True,
                     help="check that the boundary squares to zero")

    p = sub.add_parser("verify", parents=[inputs, output], help="run the relation verifiers")
    p.add_argument("--kcheck", type=int, default=5, help="longest input tuple to check")
    sub.add_parser("dualize", parents=[inputs, output], help="print the dual coalgebra (or comodule) presentation")
    for name, text in (
        ("borel", "homology of the Borel complex"),
        ("coborel", "homology of the co-Borel complex"),
        ("twisted-borel", "homology of the twisted Borel complex"),
        ("tate", "homology of the Tate complex (cone of the norm map)"),
        ("les-check", "exactness of the long exact sequence of the norm cone"),
    ):
        sub.add_parser(name, parents=[inputs, output, policy], help=text)
    p = sub.add_parser("trees", parents=[output], help="tree counts by codimension")
    p.add_argument("--n", type=int, required=True, help="number of leaves")
    p.add_argument("--list", action="store_true", help="include the bracketings")
    return parser


def load_inputs(args) -> tuple:
    """Return ``(algebra, module)`` from --example / --algebra / --module."""
    verify = args.command != "verify"
    given = [x for x in (args.example, args.algebra, args.module) if x]
    if args.example and len(given) > 1:
        raise UsageError("--example cannot be combined with --algebra or --module")
    if not given:
        raise UsageError("one of --example, --algebra or --module is required")
    if args.example:
        return builtin_example(args.example)
    if args.module:
        p = parse_presentation(args.module, verify=verify)
        if p.kind != "module" or p.structure.side != LEFT:
            raise UsageError(f"{args.module}: expected a left module presentation")
        if args.algebra:
            q = parse_presentation(args.algebra, verify=verify)
            if q.structure != p.algebra:
                raise UsageError(f"{args.module}: its algebra differs from {args.algebra}")
        return p.algebra, p.structure
    p = parse_presentation(args.algebra, verify=verify)
    if p.kind != "algebra":
        raise UsageError(f"{args.algebra}: expected an algebra presentation")
    return p.structure, trivial_module(p.structure, LEFT)


def _range_json(r: TrustedRange) -> list:
    return list(r.as_tuple())


def _select_degrees(c: ChainComplex, requested: Optional[List[int]]) -> List[int]:
    if requested is None:
        return c.trusted_degrees()
    bad = [d for d in requested if d not in c.trusted]
    if bad:
        raise DegreeError(f"degrees {bad} lie outside the trusted range {c.trusted} of {c.name}")
    return requested


def _d2_check(c: ChainComplex, degrees: List[int], enabled: bool) -> dict:
    if not enabled:
        return {"ok": True, "skipped": True}
    bad = c.d2_failures(sorted({e for d in degrees for e in (d, d + 1)}))
    return {"ok": not bad, "failing_degrees": bad}


def _betti_rows(c: ChainComplex, degrees: List[int], d2_ok: bool) -> List[dict]:
    if not d2_ok:
        return []
    return [{"degree": d, "dimension": c.betti(d), "trusted": d in c.trusted} for d in degrees]


def _complex_report(args, c: ChainComplex) -> dict:
    degrees = _select_degrees(c, args.degrees)
    d2 = _d2_check(c, degrees, args.check_d2)
    return {
        "complex": c.name,
        "trusted_range": _range_json(c.trusted),
        "betti": _betti_rows(c, degrees, d2["ok"]),
        "checks": {"d2": d2},
    }


def cmd_verify(args, a, m) -> dict:
    k = args.kcheck
    c = dualize_algebra(a)
    reports = {
        "algebra": verify_algebra_relations(a, k),
        "module": verify_module_relations(a, m, k),
        "dual_coalgebra": verify_coalgebra_relations(c, k),
        "dual_comodule": verify_comodule_relations(c, module_to_comodule(a, m), k),
        "dualizing_bimodule": verify_dualizing_bimodule(dualizing_bimodule(a), k),
    }
    return {"k_check": k, "checks": {key: r.as_dict() for key, r in reports.items()}}


def cmd_dualize(args, a, m) -> dict:
    c = dualize_algebra(a)
    if args.module:
        return dump_structure(module_to_comodule(a, m), over=c)
    return dump_structure(c)


def cmd_complex(args, a, m) -> dict:
    t = TruncationPolicy(args.kmax, args.lmax)
    if args.command == "borel":
        return _complex_report(args, borel(a, m, t))
    if args.command == "coborel":
        return _complex_report(args, coborel(a, m, t))
    if args.command == "twisted-borel":
        c = twisted_borel(a, m, t)
        rep = _complex_report(args, c)
        cert = c.notes["certificate"]
        rep["checks"]["columns"] = {"ok": cert.ok, "reason": cert.reason}
        return rep
    res = tate_complex(a, m, t, les_degrees=args.degrees)
    degrees = _select_degrees(res.cone, args.degrees)
    les = res.les
    components = {
        "twisted": {"complex": res.twisted.name, "trusted_range": _range_json(res.twisted.trusted)},
        "coborel": {"complex": res.coborel.name, "trusted_range": _range_json(res.coborel.trusted)},
    }
    les_fail = [r for r in les if r.status == "fail"]
    checks = {
        "norm": res.norm_report.as_dict(),
        "les": {
            "ok": not les_fail,
            "passed": sum(r.status == "pass" for r in les),
            "failed": len(les_fail),
            "skipped": sum(r.status == "skipped" for r in les),
        },
    }
    if args.command == "les-check":
        return {
            "complex": res.cone.name,
            "trusted_range": _range_json(res.cone.trusted),
            "components": components,
            "nodes": [
                {"complex": ("twisted", "coborel", "tate")[r.complex_index], "degree": r.degree, "status": r.status, "detail": r.detail}
                for r in les
            ],
            "checks": checks,
        }
    d2 = _d2_check(res.cone, degrees, args.check_d2)
    checks["d2"] = d2
    return {
        "complex": res.cone.name,
        "trusted_range": _range_json(res.cone.trusted),
        "components": components,
        "betti": _betti_rows(res.cone, degrees, d2["ok"]),
        "checks": checks,
    }


def cmd_trees(args) -> dict:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    s = strata(args.n)
    rep: Dict[str, object] = {
        "n": args.n,
        "counts": [{"codim": c, "count": len(ts)} for c, ts in s.items()],
        "total": sum(len(ts) for ts in s.values()),
    }
    checks = {}
    if args.n >= 3:
        adj = wall_adjacency(args.n)
        two = all(len(cs) == 2 for cs in adj.values())
        checks["walls"] = {"ok": two, "walls": len(adj), "chambers": len(s.get(0, []))}
        if args.n == 4:
            checks["pentagon"] = {"ok": chamber_graph_is_cycle(adj)}
    rep["checks"] = checks
    if args.list:
        rep["trees"] = [t.bracketing() for ts in s.values() for t in ts]
    return rep


def _all_ok(checks: dict) -> bool:
    return all(v.get("ok", True) for v in checks.values())


def _to_csv(command: str, body: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "trees":
        w.writerow(["codim", "count"])
        w.writerows([r["codim"], r["count"]] for r in body["counts"])
    elif command == "les-check":
        w.writerow(["complex", "degree", "status"])
        w.writerows([r["complex"], r["degree"], r["status"]] for r in body["nodes"])
    elif "betti" in body:
        w.writerow(["degree", "dimension", "trusted"])
        w.writerows([r["degree"], r["dimension"], str(r["trusted"]).lower()] for r in body["betti"])
    else:
        raise UsageError(f"{command} has no tabular output; use --format json")
    return buf.getvalue()


def run(argv: Sequence[str]) -> tuple:
    """Parse ``argv`` and execute it; returns ``(exit_code, report_text, args)``."""
    args = build_parser().parse_args(list(argv))
    start = time.perf_counter()
    if args.command == "trees":
        body = cmd_trees(args)
    else:
        a, m = load_inputs(args)
        if args.command == "verify":
            body = cmd_verify(args, a, m)
        elif args.command == "dualize":
            body = cmd_dualize(args, a, m)
        else:
            body = cmd_complex(args, a, m)
    ok = args.command == "dualize" or _all_ok(body.get("checks", {}))
    if args.format == "csv":
        return (0 if ok else 1), _to_csv(args.command, body), args
    if args.command == "dualize":
        report = body
    else:
        report = {"command": list(argv)}
        if args.command in COMPLEX_COMMANDS:
            report["policy"] = {"k_max": args.kmax, "l_max": args.lmax}
        report.update(body)
        report["ok"] = ok
        if args.timing:
            report["wall_clock_s"] = round(time.perf_counter() - start, 3)
    return (0 if ok else 1), json.dumps(report, indent=2) + "\n", args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text, args = run(argv)
    except (ValueError, UsageError) as err:
        print(f"ainftate: error: {err}", file=sys.stderr)
        return 2
    except NormError as err:
        print(f"ainftate: norm check failed: {err}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
