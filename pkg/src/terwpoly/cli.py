"""Command-line front end: ``terwpoly <command> ...``.

Every command builds a report dictionary, prints it as text or as JSON
(``--json``) and exits 0 when no check failed, 1 when a check failed or
the input is infeasible, and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any

from .algebra import as_fraction
from .classical import (
    ClassicalParameters,
    InfeasibleParametersError,
    PseudoPartitionParameters,
    classical_array,
    classical_ordering,
    classical_triple_root_list,
    imprimitivity,
    imprimitivity_names,
    pseudo_partition_array,
)
from .drg_core import (
    ArrayParseError,
    DegenerateDualsError,
    InfeasibleArrayError,
    IntersectionArray,
    dual_eigenvalues,
    krein_parameters,
    krein_violations,
    parse_array,
    q_polynomial_orderings,
    spectrum,
)
from .graph_oracle import (
    MAX_VERTICES,
    GraphSizeError,
    build,
    check_distance_regular,
    distance_matrix,
    export_edges,
    verify_spear,
    verify_terwilliger,
)
from .terwilliger import DiameterTooSmallError, forbidden_region, terwilliger_polynomial
from .type2 import (
    OPEN_ARRAYS,
    Type2ParameterError,
    Type2Parameters,
    condition_check,
    dual_parameters,
    gamma_r,
    screen,
    type2_array,
    type2_eigenvalues,
    type2_leading_coefficient,
    type2_ordering,
    type2_terwilliger_roots,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

EXPECTED_SCREEN = {
    "{91,66,45;1,6,15}": "folded-halved-cube",
    "{66,45,28;1,6,30}": "folded-halved-cube",
    "{120,91,66,45;1,6,15,56}": "folded-halved-cube",
    "{36,25,16;1,4,18}": "folded-Johnson",
}


class UsageError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Exact rationals become "p/q" strings; containers are converted recursively."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return jsonable(obj.item())
    return str(obj)


def polynomial_report(ia: IntersectionArray, duals, tolerance: float) -> dict:
    td = terwilliger_polynomial(ia, duals)
    out = {
        "T": str(td.T),
        "coefficients": list(reversed(td.T.coeffs)),
        "leading_coefficient": td.leading_coefficient,
        "tau": list(td.tau),
        "p_plus_plus": str(td.p_plus_plus),
        "p_plus_minus": str(td.p_plus_minus),
        "p_minus_minus": str(td.p_minus_minus),
    }
    if td.roots is None:
        out["roots"] = None
        out["forbidden_intervals"] = None
        return out
    out["roots"] = [{"value": v, "multiplicity": m, "exact": e} for v, m, e in td.roots.sorted_entries()]
    region = forbidden_region(td.T, td.roots)
    out["forbidden_intervals"] = [[lo, hi] for lo, hi in region.forbidden_intervals]
    out["forbidden_region_approximate"] = region.approximate
    return out


def _spectrum_report(ia: IntersectionArray):
    spec = spectrum(ia)
    return spec, {
        "eigenvalues": list(spec.thetas),
        "multiplicities": list(spec.multiplicities),
        "issues": list(spec.issues),
    }


def _select(orders, index):
    if index is None:
        return list(enumerate(orders))
    if not 0 <= index < len(orders):
        raise UsageError(f"--ordering {index} out of range: {len(orders)} Q-polynomial ordering(s)")
    return [(index, orders[index])]


def analyze_array(ia: IntersectionArray, args) -> tuple[dict, int]:
    report: dict[str, Any] = {"array": str(ia), "warnings": list(ia.warnings), "errors": []}
    report["v"] = ia.v
    report["valencies"] = list(ia.valencies)
    spec, report["spectrum"] = _spectrum_report(ia)
    failed = bool(spec.issues)
    q = krein_parameters(ia, spec)
    report["krein_violations"] = krein_violations(q, args.tolerance)
    failed |= bool(report["krein_violations"])
    orders = q_polynomial_orderings(ia, spec, q, args.tolerance)
    report["orderings"] = []
    if ia.D < 3:
        report["errors"].append(f"Terwilliger polynomial requires D >= 3, got D = {ia.D}; analysis limited to spectrum")
        return report, EXIT_FAILED
    for idx, order in _select(orders, args.ordering):
        entry: dict[str, Any] = {"index": idx, "sequence": list(order.sequence)}
        try:
            duals = dual_eigenvalues(ia, spec, order)
            entry["duals"] = list(duals.theta_star)
            entry.update(polynomial_report(ia, duals.theta_star, args.tolerance))
        except (DegenerateDualsError, DiameterTooSmallError, ArithmeticError) as exc:
            entry["error"] = str(exc)
            failed = True
        report["orderings"].append(entry)
    if not orders:
        report["errors"].append("no Q-polynomial ordering")
    return report, EXIT_FAILED if failed else EXIT_OK


def cmd_analyze(args) -> tuple[dict, int]:
    ia = parse_array(args.array)
    return analyze_array(ia, args)


def cmd_classical(args) -> tuple[dict, int]:
    cp = ClassicalParameters.of(args.D, as_fraction(args.b), as_fraction(args.alpha), as_fraction(args.beta))
    ia = classical_array(cp)
    spec, spec_rep = _spectrum_report(ia)
    order, duals = classical_ordering(cp, ia, spec)
    poly = polynomial_report(ia, duals.theta_star, args.tolerance)
    closed = classical_triple_root_list(cp)
    assembled = [r["value"] for r in poly["roots"] for _ in range(r["multiplicity"])] if poly["roots"] else None
    match = assembled == closed
    report = {
        "parameters": {"D": cp.D, "b": cp.b, "alpha": cp.alpha, "beta": cp.beta},
        "array": str(ia),
        "imprimitivity": imprimitivity_names(imprimitivity(cp)),
        "spectrum": spec_rep,
        "ordering": list(order.sequence),
        "duals": list(duals.theta_star),
        **poly,
        "closed_form_roots": closed,
        "closed_form_match": match,
    }
    return report, EXIT_OK if match else EXIT_FAILED


def cmd_type2(args) -> tuple[dict, int]:
    p = Type2Parameters.of(as_fraction(args.t), as_fraction(args.x), as_fraction(args.y), args.D)
    ia = type2_array(p)
    spec, spec_rep = _spectrum_report(ia)
    order, duals = type2_ordering(p, ia, spec)
    dual = dual_parameters(p, duals)
    poly = polynomial_report(ia, duals.theta_star, args.tolerance)
    closed = type2_terwilliger_roots(p, ia)
    assembled = [r["value"] for r in poly["roots"] for _ in range(r["multiplicity"])] if poly["roots"] else None
    lead = type2_leading_coefficient(p, ia)
    ok = assembled == closed.sorted() and closed.identities_hold and lead == poly["leading_coefficient"] and dual.matches
    report = {
        "parameters": {"t": p.t, "x": p.x, "y": p.y, "D": p.D},
        "h": p.h,
        "t_star": p.t_star,
        "h_star": dual.h_star,
        "b0_star": dual.b0_star_multiplicity,
        "b0_star_formula": dual.b0_star_formula,
        "dual_note": dual.note,
        "array": str(ia),
        "type2_eigenvalues": type2_eigenvalues(p, ia),
        "spectrum": spec_rep,
        "ordering": list(order.sequence),
        "duals": list(duals.theta_star),
        "gamma2": gamma_r(ia, 2),
        "condition": condition_check(ia),
        **poly,
        "closed_form_roots": closed.sorted(),
        "root_identities_hold": closed.identities_hold,
        "closed_form_leading_coefficient": lead,
        "consistent": ok,
    }
    return report, EXIT_OK if ok else EXIT_FAILED


def cmd_pseudo_partition(args) -> tuple[dict, int]:
    pp = PseudoPartitionParameters(args.alpha, args.Dprime, args.gamma)
    ia = pseudo_partition_array(pp)
    report, code = analyze_array(ia, args)
    report = {"parameters": {"alpha": pp.alpha, "Dprime": pp.Dprime, "gamma": pp.gamma,
                             "cover_diameter": pp.cover_diameter}, **report}
    return report, code


def screening_dict(rep) -> dict:
    return {
        "input": {"t": rep.input.t, "x": rep.input.x, "y": rep.input.y, "D": rep.input.D},
        "array": str(rep.array) if rep.array else None,
        "gamma2": rep.gamma2,
        "condition": rep.condition,
        "branch": rep.branch,
        "ordering": rep.ordering,
        "roots": rep.roots,
        "forbidden_interval": rep.forbidden_interval,
        "interval_bound": None if rep.interval_bound is None else {
            "value": rep.interval_bound[0], "equality": rep.interval_bound[1]},
        "srg": None if rep.srg is None else list(rep.srg.as_tuple()),
        "seidel_matches": [str(m) for m in rep.seidel_matches],
        "eliminated": rep.eliminated,
        "decision_row": rep.decision_row,
        "verdict": rep.verdict,
        "reason": rep.reason,
        "steps": rep.steps,
    }


def cmd_screen_known(args) -> tuple[dict, int]:
    results = []
    ok = True
    for name, p in OPEN_ARRAYS.items():
        rep = screen(p)
        entry = screening_dict(rep)
        entry["expected"] = EXPECTED_SCREEN[name]
        entry["agrees"] = rep.verdict == EXPECTED_SCREEN[name] and str(rep.array) == name
        ok &= entry["agrees"]
        results.append(entry)
    return {"screenings": results}, EXIT_OK if ok else EXIT_FAILED


def cmd_verify(args) -> tuple[dict, int]:
    g = build(args.family, args.params, args.max_vertices)
    dist = distance_matrix(g)
    ia = check_distance_regular(g, dist)
    report: dict[str, Any] = {"graph": g.name, "vertices": g.n, "array": str(ia), "orderings": []}
    if ia.D < 3:
        report["error"] = f"triple law and Terwilliger polynomial need D >= 3, got D = {ia.D}"
        return report, EXIT_FAILED
    spec = spectrum(ia)
    orders = q_polynomial_orderings(ia, spec, tol=args.tolerance)
    if not orders:
        report["error"] = "graph is not Q-polynomial"
        return report, EXIT_FAILED
    ok = True
    for idx, order in _select(orders, args.ordering):
        sp_rep = verify_spear(g, order, dist=dist, ia=ia)
        tw_rep = verify_terwilliger(g, order, dist=dist, ia=ia, tolerance=args.tolerance)
        ok &= sp_rep.passed and tw_rep.passed
        report["orderings"].append({
            "index": idx,
            "sequence": list(order.sequence),
            "triple_law": {
                "passed": sp_rep.passed,
                "checked": {f"i={i},delta={d}": c for (i, d), c in sorted(sp_rep.checked.items())},
                "witness": sp_rep.witness,
            },
            "terwilliger": {
                "passed": tw_rep.passed,
                "eigenvalues_checked": tw_rep.checked,
                "zeros": tw_rep.zeros,
                "minimum": tw_rep.minimum,
                "witness": tw_rep.witness,
            },
        })
    report["verdict"] = "PASS" if ok else "FAIL"
    return report, EXIT_OK if ok else EXIT_FAILED


def cmd_export_graph(args) -> tuple[dict, int]:
    g = build(args.family, args.params, args.max_vertices)
    text = export_edges(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        return {"graph": g.name, "vertices": g.n, "edges": text.count("\n"), "output": args.output}, EXIT_OK
    sys.stdout.write(text)
    return {}, EXIT_OK


def _fmt(val) -> str:
    if isinstance(val, list):
        if len(val) == 2 and val[0] is None:
            return "[-inf, " + _fmt(val[1]) + "]"
        return "[" + ", ".join(_fmt(v) for v in val) + "]"
    return "inf" if val is None else str(val)


def _text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                if len(item) <= 4 and not any(isinstance(v, (dict, list)) for v in item.values()):
                    lines.append(pad + "  " + ", ".join(f"{k}={v}" for k, v in item.items()))
                else:
                    lines.append(_text(item, indent + 1))
                    lines.append("")
        else:
            lines.append(f"{pad}{key}: {_fmt(val)}")
    return "\n".join(line for line in lines if line is not None)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="terwpoly", description="Terwilliger polynomial tools for distance-regular graphs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--tolerance", type=float, default=1e-9, help="tolerance for approximate checks")
    common.add_argument("--max-vertices", type=int, default=MAX_VERTICES, help="size cap for graph constructions")
    common.add_argument("--ordering", type=int, default=None, help="restrict to one Q-polynomial ordering (0-based)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze an intersection array 'b0,b1,...;c1,c2,...'")
    p.add_argument("array")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classical", parents=[common], help="array and roots from classical parameters")
    for name in ("D", "b", "alpha", "beta"):
        p.add_argument(name, type=int if name == "D" else str)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("type2", parents=[common], help="array and roots from type-2 parameters t x y D")
    for name in ("t", "x", "y"):
        p.add_argument(name)
    p.add_argument("D", type=int)
    p.set_defaults(func=cmd_type2)

    p = sub.add_parser("pseudo-partition", parents=[common], help="analyze a pseudo-partition array")
    p.add_argument("alpha", type=int)
    p.add_argument("Dprime", type=int)
    p.add_argument("gamma", type=int)
    p.set_defaults(func=cmd_pseudo_partition)

    p = sub.add_parser("screen-known", parents=[common], help="screen the four open type-2 arrays")
    p.set_defaults(func=cmd_screen_known)

    for name, func, hlp in (
        ("verify", cmd_verify, "build a graph and check the triple law and local eigenvalue bound"),
        ("export-graph", cmd_export_graph, "write a graph as an edge list"),
    ):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("family")
        p.add_argument("params", nargs="*", type=int)
        if name == "export-graph":
            p.add_argument("-o", "--output")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except ArrayParseError as exc:
        report, code = {"error": f"parse error at position {exc.position}: {exc}"}, EXIT_USAGE
    except (UsageError, ValueError) as exc:
        if isinstance(exc, (InfeasibleArrayError, InfeasibleParametersError, Type2ParameterError,
                            GraphSizeError, DiameterTooSmallError)):
            report, code = {"error": str(exc)}, EXIT_FAILED
        else:
            report, code = {"error": str(exc)}, EXIT_USAGE
    if not report:
        return code
    report = {"command": args.command, **report, "exit_code": code,
              "elapsed_seconds": round(time.perf_counter() - start, 3)}
    if args.json:
        print(json.dumps(jsonable(report), sort_keys=True, indent=2))
    else:
        print(_text(jsonable(report)))
    return code


if __name__ == "__main__":
    sys.exit(main())
