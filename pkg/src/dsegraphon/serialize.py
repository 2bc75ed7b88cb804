"""JSON wire formats for the algebraic and analytic objects.

Rationals travel as exact "p/q" strings (or "p" when integral); every
encoder emits a deterministic ordering so serialized documents are
byte-stable for identical inputs.
"""

from __future__ import annotations

from fractions import Fraction

from .trees import Tree, Forest, ForestSum, EMPTY_FOREST
from .hopf import TensorSum
from .dse import Cocycle, DSESpec, DSESolution
from .renorm import LaurentSeries, ScalePoly, ToyRules
from .graphon import StepGraphon
from .graphpoly import MultiGraph, MultiPoly


def rational_to_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"expected a rational string, got {type(s).__name__}")
    return Fraction(s.strip())


# -- trees and forests -----------------------------------------------------------

def tree_to_json(t: Tree) -> dict:
    return {"d": t.label, "c": [tree_to_json(c) for c in t.children]}


def tree_from_json(obj) -> Tree:
    if not isinstance(obj, dict) or "d" not in obj:
        raise ValueError("tree object needs a 'd' label field")
    children = obj.get("c", [])
    return Tree(obj["d"], [tree_from_json(c) for c in children])


def forest_to_json(f: Forest) -> list:
    return [tree_to_json(t) for t in f]


def forest_from_json(obj) -> Forest:
    if not isinstance(obj, list):
        raise ValueError("forest must be an array of trees")
    return Forest(tree_from_json(t) for t in obj)


def forest_sum_to_json(s: ForestSum) -> list:
    out = []
    for f in sorted(s.terms, key=lambda f: (f.grade, f.code)):
        out.append({"coef": rational_to_str(s.terms[f]),
                    "forest": forest_to_json(f)})
    return out


def forest_sum_from_json(obj) -> ForestSum:
    if not isinstance(obj, list):
        raise ValueError("forest sum must be an array of terms")
    total = ForestSum.zero()
    for item in obj:
        c = rational_from_str(item["coef"])
        total = total + ForestSum.of(forest_from_json(item["forest"]), c)
    return total


def tensor_sum_to_json(s: TensorSum) -> list:
    out = []
    for (l, r) in sorted(s.terms, key=lambda p: (p[0].code, p[1].code)):
        out.append({"coef": rational_to_str(s.terms[(l, r)]),
                    "left": forest_to_json(l), "right": forest_to_json(r)})
    return out


# -- equation specs and solutions ---------------------------------------------------

def dse_spec_to_json(spec: DSESpec) -> dict:
    return {"cocycles": [{"decoration": c.decoration,
                          "omega": rational_to_str(c.omega)}
                         for c in spec.cocycles],
            "order": spec.order,
            "coupling": rational_to_str(spec.coupling)}


def dse_spec_from_json(obj) -> DSESpec:
    if not isinstance(obj, dict):
        raise ValueError("equation spec must be an object")
    raw = obj.get("cocycles")
    if not raw:
        raise ValueError("equation spec needs a nonempty 'cocycles' array")
    cocycles = tuple(Cocycle(c["decoration"], rational_from_str(c["omega"]))
                     for c in raw)
    order = obj.get("order")
    coupling = rational_from_str(obj.get("coupling", "1"))
    return DSESpec(cocycles=cocycles, order=order, coupling=coupling)


def solution_to_json(sol: DSESolution) -> list:
    return [forest_sum_to_json(x) for x in sol.coefficients]


# -- Laurent data ---------------------------------------------------------------------

def laurent_to_json(s: LaurentSeries) -> dict:
    terms = []
    for p in sorted(s.terms):
        poly = s.terms[p]
        coef = [[rational_to_str(poly.coeffs[k]), k] for k in sorted(poly.coeffs)]
        terms.append({"pow": p, "coef": coef})
    return {"window": [s.lo, s.hi], "terms": terms}


def laurent_from_json(obj) -> LaurentSeries:
    window = tuple(obj.get("window", (-8, 2)))
    terms = {}
    for item in obj.get("terms", []):
        poly = {int(k): rational_from_str(c) for (c, k) in item["coef"]}
        terms[int(item["pow"])] = ScalePoly(poly)
    return LaurentSeries(terms, window)


def toy_rules_to_json(r: ToyRules) -> dict:
    return {"residues": {d: rational_to_str(v)
                         for d, v in sorted(r.residues.items())},
            "scale": None if r.scale is None else rational_to_str(r.scale),
            "window": list(r.window)}


def toy_rules_from_json(obj) -> ToyRules:
    if not isinstance(obj, dict):
        raise ValueError("rules must be an object")
    residues = {d: rational_from_str(v)
                for d, v in obj.get("residues", {}).items()}
    scale = obj.get("scale")
    if scale is not None:
        scale = rational_from_str(scale)
    window = tuple(obj.get("window", (-8, 2)))
    return ToyRules(residues=residues, scale=scale, window=window)


# -- graphons and graphs ----------------------------------------------------------------

def graphon_to_json(w: StepGraphon) -> dict:
    return {"measures": [rational_to_str(m) for m in w.measures],
            "values": [[rational_to_str(v) for v in row] for row in w.values]}


def graphon_from_json(obj) -> StepGraphon:
    return StepGraphon([rational_from_str(m) for m in obj["measures"]],
                       [[rational_from_str(v) for v in row]
                        for row in obj["values"]])


def multigraph_to_json(g: MultiGraph) -> dict:
    return {"n": g.n, "edges": [[u, v] for (u, v) in g.edges]}


def multigraph_from_json(obj) -> MultiGraph:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("graph object needs 'n' and 'edges'")
    return MultiGraph(obj["n"], [tuple(e) for e in obj.get("edges", [])])


def multipoly_to_json(p: MultiPoly) -> list:
    rows = []
    for mono in sorted(p.terms, key=lambda m: tuple(sorted(m))):
        rows.append({"coef": rational_to_str(p.terms[mono]),
                     "exps": {v: e for (v, e) in sorted(mono)}})
    return rows


def multipoly_from_json(obj) -> MultiPoly:
    total = MultiPoly.const(0)
    for item in obj:
        c = rational_from_str(item["coef"])
        term = MultiPoly.const(c)
        for v, e in item.get("exps", {}).items():
            term = term * MultiPoly.var(v) ** int(e)
        total = total + term
    return total
