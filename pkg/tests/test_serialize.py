"""Round-trip and byte-stability checks for the JSON wire formats."""

import json
from fractions import Fraction as F

import pytest

from dsegraphon import serialize as ser
from dsegraphon.trees import Forest, ForestSum, Tree, ladder, leaf
from dsegraphon.hopf import coproduct
from dsegraphon.dse import Cocycle, DSESpec, solve
from dsegraphon.renorm import LaurentSeries, ToyRules, toy_feynman_rules
from dsegraphon.graphon import StepGraphon, graphon_from_graph, path_graph
from dsegraphon.graphpoly import MultiGraph, MultiPoly, tutte


def test_rational_strings():
    assert ser.rational_to_str(F(3)) == "3"
    assert ser.rational_to_str(F(-1, 2)) == "-1/2"
    assert ser.rational_from_str("7/4") == F(7, 4)
    assert ser.rational_from_str(5) == F(5)
    assert ser.rational_from_str(" -2/3 ") == F(-2, 3)
    with pytest.raises(ValueError):
        ser.rational_from_str(1.5)


def test_tree_and_forest_round_trip():
    t = Tree("a", [Tree("b"), Tree("a", [Tree("c")])])
    assert ser.tree_from_json(ser.tree_to_json(t)) == t
    f = Forest([t, leaf("b"), ladder(3)])
    assert ser.forest_from_json(ser.forest_to_json(f)) == f
    with pytest.raises(ValueError):
        ser.tree_from_json({"c": []})
    with pytest.raises(ValueError):
        ser.forest_from_json({"d": "a"})


def test_forest_sum_round_trip_and_stability():
    s = 2 * ForestSum.of(ladder(2)) - F(1, 3) * ForestSum.of(
        Forest([leaf("a"), leaf("b")])) + ForestSum.unit()
    doc = ser.forest_sum_to_json(s)
    assert ser.forest_sum_from_json(doc) == s
    assert json.dumps(doc) == json.dumps(ser.forest_sum_to_json(s))
    with pytest.raises(ValueError):
        ser.forest_sum_from_json({"coef": "1"})


def test_tensor_sum_serialization_is_ordered():
    doc = ser.tensor_sum_to_json(coproduct(ForestSum.of(ladder(2))))
    codes = [(json.dumps(item["left"]), json.dumps(item["right"]))
             for item in doc]
    assert codes == sorted(codes)
    assert len(doc) == 3


def test_spec_and_solution_round_trip():
    spec = DSESpec((Cocycle("g1", F(1)), Cocycle("g2", F(-1, 2))),
                   order=3, coupling=F(2, 5))
    doc = ser.dse_spec_to_json(spec)
    back = ser.dse_spec_from_json(doc)
    assert back == spec
    sol = solve(spec)
    sol_doc = ser.solution_to_json(sol)
    coeffs = [ser.forest_sum_from_json(x) for x in sol_doc]
    assert coeffs == list(sol.coefficients)
    with pytest.raises(ValueError):
        ser.dse_spec_from_json({"cocycles": []})
    with pytest.raises(ValueError):
        ser.dse_spec_from_json([1, 2])


def test_laurent_round_trip():
    rules = ToyRules(residues={"g": F(1)}, scale=F(1, 2))
    val = toy_feynman_rules(rules, ForestSum.of(ladder(2)))
    doc = ser.laurent_to_json(val)
    back = ser.laurent_from_json(doc)
    assert back == val and back.window == val.window
    empty = ser.laurent_from_json({"window": [-2, 1]})
    assert empty == LaurentSeries({}, (-2, 1))


def test_toy_rules_round_trip():
    r = ToyRules(residues={"g2": F(3, 7), "g1": F(1)},
                 scale=None, window=(-6, 3))
    back = ser.toy_rules_from_json(ser.toy_rules_to_json(r))
    assert back == r
    with_scale = ToyRules(residues={"g": F(1)}, scale=F(5, 4))
    assert ser.toy_rules_from_json(
        ser.toy_rules_to_json(with_scale)).scale == F(5, 4)
    with pytest.raises(ValueError):
        ser.toy_rules_from_json("not an object")


def test_graphon_round_trip():
    w = graphon_from_graph(path_graph(3))
    back = ser.graphon_from_json(ser.graphon_to_json(w))
    assert back.measures == w.measures and back.values == w.values
    const = StepGraphon.constant(F(2, 3), k=2)
    assert ser.graphon_from_json(ser.graphon_to_json(const)).is_constant()


def test_multigraph_round_trip():
    g = MultiGraph(3, [(0, 1), (0, 1), (2, 2)])
    back = ser.multigraph_from_json(ser.multigraph_to_json(g))
    assert back.n == g.n and back.edges == g.edges
    with pytest.raises(ValueError):
        ser.multigraph_from_json({"edges": []})


def test_multipoly_round_trip():
    p = tutte(MultiGraph(4, [(0, 1), (1, 2), (2, 0), (2, 3)]))
    back = ser.multipoly_from_json(ser.multipoly_to_json(p))
    assert back == p
    q = MultiPoly.const(F(1, 2)) - 3 * MultiPoly.var("w1") ** 2
    assert ser.multipoly_from_json(ser.multipoly_to_json(q)) == q
    assert ser.multipoly_from_json([]) == MultiPoly.const(0)
