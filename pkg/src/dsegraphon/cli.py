"""Command-line drivers for reproducible experiments.

Every run emits a self-describing document: tool version, the resolved
configuration (semantic content, not file paths), a sha256 of that
configuration, the results, and a list of named PASS/FAIL checks.
Identical configurations produce byte-identical output.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 input or
usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .dse import solve, structural_sum
from .graphon import SizeError, cut_norm, density_fingerprint, \
    convergence_trace, feynman_graphon
from .graphpoly import MultiGraph, generate_connected_multigraphs, \
    loop_number, spanning_tree_count, symanzik_det, symanzik_psi, tutte
from .haar import ball_measure_mc, ks_critical_value, norm_uniformity_statistic
from .renorm import WindowError, renormalize_solution
from .serialize import dse_spec_from_json, dse_spec_to_json, \
    forest_sum_to_json, graphon_to_json, laurent_to_json, \
    multigraph_from_json, multigraph_to_json, multipoly_to_json, \
    rational_from_str, rational_to_str, solution_to_json, \
    toy_rules_from_json, toy_rules_to_json


class CLIError(Exception):
    """Bad input: reported on stderr, exit code 2."""


DEFAULT_RADII = "1/10,1/4,1/2,3/4,9/10"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: invalid JSON at line {exc.lineno} "
                       f"column {exc.colno}: {exc.msg}") from exc


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _document(config: dict, results, checks: list[dict]) -> dict:
    return {"tool": "dsegraphon", "version": __version__, "config": config,
            "config_sha256": _config_hash(config), "results": results,
            "checks": checks}


def _render(doc: dict, fmt: str, header: list[str], rows: list[list]) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# tool=dsegraphon\n# version={__version__}\n")
    buf.write(f"# config_sha256={doc['config_sha256']}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _check(name: str, ok: bool) -> dict:
    return {"name": name, "status": "PASS" if ok else "FAIL"}


def _spec_from_args(args) -> dict:
    obj = _load_json(args.spec)
    if not isinstance(obj, dict):
        raise CLIError(f"{args.spec}: equation spec must be a JSON object")
    if args.order is not None:
        obj = {**obj, "order": args.order}
    if args.coupling is not None:
        obj = {**obj, "coupling": args.coupling}
    return obj


def _edges_code(g: MultiGraph) -> str:
    return ";".join(f"{u}-{v}" for (u, v) in g.edges) or "-"


def _graph_batch(args) -> list[MultiGraph]:
    if args.graphs is not None:
        obj = _load_json(args.graphs)
        if not isinstance(obj, list):
            raise CLIError(f"{args.graphs}: expected a JSON array of graphs")
        return [multigraph_from_json(item) for item in obj]
    return generate_connected_multigraphs(args.max_edges)


# -- subcommand handlers ----------------------------------------------------------

def _run_solve(args):
    spec_obj = _spec_from_args(args)
    sol = solve(dse_spec_from_json(spec_obj))
    config = {"subcommand": "solve", "spec": dse_spec_to_json(sol.spec),
              "format": args.format}
    summary = []
    rows = []
    for n in range(1, sol.order + 1):
        x = sol.coefficients[n]
        csum = sum(x.terms.values(), Fraction(0))
        summary.append({"grade": n, "monomials": len(x.terms),
                        "coefficient_sum": rational_to_str(csum)})
        rows.append([n, len(x.terms), rational_to_str(csum)])
    results = {"coefficients": solution_to_json(sol), "summary": summary}
    header = ["grade", "monomials", "coefficient_sum"]
    return config, results, [], header, rows


def _run_renorm(args):
    spec_obj = _spec_from_args(args)
    sol = solve(dse_spec_from_json(spec_obj))
    rules_obj = _load_json(args.rules)
    rules = toy_rules_from_json(rules_obj)
    window_pinned = isinstance(rules_obj, dict) and "window" in rules_obj
    m = args.order if args.order is not None else sol.order
    try:
        report = renormalize_solution(rules, sol, m, widen=not window_pinned)
    except WindowError as exc:
        raise CLIError(str(exc)) from exc
    config = {"subcommand": "renorm", "spec": dse_spec_to_json(sol.spec),
              "rules": toy_rules_to_json(rules), "order": m,
              "format": args.format}
    grades = []
    rows = []
    checks = []
    for n in range(1, m + 1):
        ren = report.renormalized[n - 1]
        ct = report.counterterms[n - 1]
        finite = ren.coeff(0)
        pole_free = ren.is_pole_free()
        grades.append({"grade": n,
                       "renormalized": laurent_to_json(ren),
                       "counterterm": laurent_to_json(ct),
                       "finite_part": [[rational_to_str(finite.coeffs[k]), k]
                                       for k in sorted(finite.coeffs)],
                       "pole_free": pole_free})
        rows.append([n, "yes" if pole_free else "no", str(finite)])
        checks.append(_check(f"pole-free-grade-{n}", pole_free))
    results = {"grades": grades, "window": list(report.window),
               "widened": report.widened,
               "scale_symbolic": report.scale_symbolic}
    return config, results, checks, ["grade", "pole_free", "finite_part"], rows


def _run_graphon(args):
    spec_obj = _spec_from_args(args)
    sol = solve(dse_spec_from_json(spec_obj))
    m = args.order if args.order is not None else sol.order
    y = structural_sum(sol, m)
    w = feynman_graphon(y, sol.coupling)
    try:
        norm_val = cut_norm(w, args.mode, seed=args.seed)
    except SizeError as exc:
        raise CLIError(str(exc)) from exc
    fp = density_fingerprint(w, level=args.level)
    config = {"subcommand": "graphon", "spec": dse_spec_to_json(sol.spec),
              "order": m, "level": args.level, "mode": args.mode,
              "seed": args.seed, "format": args.format}
    fp_rows = [{"graph": code, "density": rational_to_str(d)}
               for code, d in fp.densities]
    results = {"graphon": graphon_to_json(w),
               "cut_norm": {"value": rational_to_str(norm_val),
                            "mode": args.mode},
               "fingerprint": fp_rows}
    rows = [[r["graph"], r["density"]] for r in fp_rows]
    return config, results, [], ["graph", "density"], rows


def _run_tutte(args):
    batch = _graph_batch(args)
    config = {"subcommand": "tutte",
              "graphs": [multigraph_to_json(g) for g in batch],
              "format": args.format}
    entries = []
    rows = []
    all_ok = True
    for g in batch:
        poly = tutte(g)
        t11 = poly.eval({"x": Fraction(1), "y": Fraction(1)})
        connected = g.component_count() == 1
        trees = spanning_tree_count(g) if connected else None
        match = (t11 == trees) if connected else None
        if match is False:
            all_ok = False
        entries.append({"graph": multigraph_to_json(g),
                        "tutte": multipoly_to_json(poly),
                        "t11": rational_to_str(t11),
                        "spanning_trees": trees,
                        "match": match})
        rows.append([g.n, _edges_code(g), rational_to_str(t11),
                     "" if trees is None else trees,
                     "" if match is None else ("yes" if match else "no")])
    checks = [] if not batch else [_check("tutte-t11-matrix-tree", all_ok)]
    header = ["n", "edges", "t11", "spanning_trees", "match"]
    return config, {"entries": entries}, checks, header, rows


def _run_symanzik(args):
    batch = _graph_batch(args)
    config = {"subcommand": "symanzik",
              "graphs": [multigraph_to_json(g) for g in batch],
              "seed": args.seed, "format": args.format}
    rng = random.Random(args.seed)
    entries = []
    rows = []
    hom_ok = True
    det_ok = True
    for g in batch:
        psi = symanzik_psi(g)
        loops = loop_number(g)
        homogeneous = psi.is_homogeneous(loops)
        matches = True
        if g.component_count() == 1:
            for _ in range(3):
                assignment = {idx: Fraction(rng.randint(1, 9), rng.randint(1, 9))
                              for idx in g.evars}
                if symanzik_det(g, assignment) != psi.eval(
                        {f"w{idx}": v for idx, v in assignment.items()}):
                    matches = False
        hom_ok = hom_ok and homogeneous
        det_ok = det_ok and matches
        entries.append({"graph": multigraph_to_json(g),
                        "psi": multipoly_to_json(psi), "loops": loops,
                        "homogeneous": homogeneous, "det_matches": matches})
        rows.append([g.n, _edges_code(g), loops,
                     "yes" if homogeneous else "no",
                     "yes" if matches else "no"])
    checks = [] if not batch else [
        _check("symanzik-homogeneity", hom_ok),
        _check("symanzik-det-identity", det_ok)]
    header = ["n", "edges", "loops", "homogeneous", "det_matches"]
    return config, {"entries": entries}, checks, header, rows


def _run_haar(args):
    try:
        radii = [rational_from_str(tok) for tok in args.radii.split(",") if tok]
    except ValueError as exc:
        raise CLIError(f"bad radius list {args.radii!r}: {exc}") from exc
    config = {"subcommand": "haar", "depth": args.depth,
              "samples": args.samples, "seed": args.seed,
              "radii": [rational_to_str(r) for r in radii],
              "format": args.format}
    entries = []
    rows = []
    checks = []
    for r in radii:
        est = ball_measure_mc(r, depth=args.depth, samples=args.samples,
                              seed=args.seed)
        ok = est.within_tolerance()
        entries.append({"r": rational_to_str(r),
                        "estimate": repr(float(est.estimate)),
                        "stderr": repr(est.stderr),
                        "tolerance": repr(est.tolerance()),
                        "within_tolerance": ok,
                        "m": est.depth, "N": est.samples, "seed": est.seed})
        rows.append([rational_to_str(r), repr(float(est.estimate)),
                     repr(est.stderr), est.depth, est.samples, est.seed])
        checks.append(_check(f"ball-measure-r={rational_to_str(r)}", ok))
    ks = norm_uniformity_statistic(args.depth, args.samples, args.seed)
    crit = ks_critical_value(args.samples)
    checks.append(_check("norm-uniformity-ks", ks < crit))
    results = {"balls": entries, "ks_statistic": repr(ks),
               "ks_critical_1pct": repr(crit)}
    return config, results, checks, ["r", "estimate", "stderr", "m", "N", "seed"], rows


def _run_trace(args):
    spec_obj = _spec_from_args(args)
    sol = solve(dse_spec_from_json(spec_obj))
    m = args.order if args.order is not None else sol.order
    try:
        distances = convergence_trace(sol, m, mode=args.mode, seed=args.seed)
    except SizeError as exc:
        raise CLIError(str(exc)) from exc
    config = {"subcommand": "trace", "spec": dse_spec_to_json(sol.spec),
              "order": m, "mode": args.mode, "seed": args.seed,
              "format": args.format}
    non_increasing = all(distances[i] >= distances[i + 1]
                         for i in range(len(distances) - 1))
    positive = all(d > 0 for d in distances)
    results = {"distances": [rational_to_str(d) for d in distances],
               "mode": args.mode, "non_increasing": non_increasing}
    rows = [[i + 1, rational_to_str(d), args.mode]
            for i, d in enumerate(distances)]
    checks = [_check("trace-positive", positive)]
    return config, results, checks, ["step", "distance", "mode"], rows


_HANDLERS = {"solve": _run_solve, "renorm": _run_renorm,
             "graphon": _run_graphon, "tutte": _run_tutte,
             "symanzik": _run_symanzik, "haar": _run_haar,
             "trace": _run_trace}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsegraphon",
        description="Workbench for truncated combinatorial Dyson-Schwinger "
                    "equations, renormalization, graph polynomials, graphon "
                    "limits, and the Haar solution-space model.")
    parser.add_argument("--version", action="version",
                        version=f"dsegraphon {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, spec=False, rules=False, graphs=False):
        if spec:
            p.add_argument("--spec", required=True,
                           help="equation spec JSON file")
            p.add_argument("--order", type=int, default=None,
                           help="override truncation order")
            p.add_argument("--coupling", default=None,
                           help="override coupling (rational)")
        if rules:
            p.add_argument("--rules", required=True,
                           help="regularized-rules JSON file")
        if graphs:
            p.add_argument("--graphs", default=None,
                           help="JSON array of multigraphs (overrides corpus)")
            p.add_argument("--max-edges", type=int, default=4,
                           help="corpus bound when --graphs absent")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=("exact", "heuristic"),
                       default="exact")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("solve", help="solve a truncated equation"),
           spec=True)
    common(sub.add_parser("renorm", help="renormalize a solved equation"),
           spec=True, rules=True)
    g = sub.add_parser("graphon", help="graphon image and fingerprint of a solution")
    common(g, spec=True)
    g.add_argument("--level", type=int, default=3,
                   help="fingerprint edge bound (<=5)")
    common(sub.add_parser("tutte", help="Tutte polynomial batch"), graphs=True)
    common(sub.add_parser("symanzik", help="Kirchhoff-Symanzik batch"),
           graphs=True)
    h = sub.add_parser("haar", help="ball-measure Monte Carlo sweep")
    common(h)
    h.add_argument("--depth", type=int, default=24)
    h.add_argument("--samples", type=int, default=100_000)
    h.add_argument("--radii", default=DEFAULT_RADII)
    t = sub.add_parser("trace", help="graphon convergence trace of a solution")
    common(t, spec=True)
    t.set_defaults(mode="heuristic")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config, results, checks, header, rows = _HANDLERS[args.subcommand](args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(_document(config, results, checks), args.format, header, rows)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 1 if any(c["status"] == "FAIL" for c in checks) else 0


if __name__ == "__main__":
    sys.exit(main())
