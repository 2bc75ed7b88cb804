"""Graph polynomials: deletion-contraction vs the rank-nullity oracle,
Kirchhoff-Symanzik spanning-tree sums vs cycle-basis determinants.

Classical anchor values (cycle, complete graph, bouquet) are stated
explicitly; everything else is cross-checked between two independent
computations.
"""

import random
import warnings
from fractions import Fraction as F

import pytest

from dsegraphon.trees import Tree, ladder, leaf
from dsegraphon.dse import Cocycle, DSESpec, solve
from dsegraphon.graphpoly import (DisconnectedNotice, MultiGraph, MultiPoly,
                                  generate_connected_multigraphs, loop_number,
                                  psi_deletion_contraction, spanning_tree_count,
                                  spanning_trees, symanzik_det, symanzik_psi,
                                  tree_to_graph, tutte, tutte_of_partial_sum,
                                  tutte_rank_nullity,
                                  tutte_subtree_formula_diagnostic)

X = MultiPoly.var("x")
Y = MultiPoly.var("y")


def triangle() -> MultiGraph:
    return MultiGraph(3, [(0, 1), (1, 2), (0, 2)])


def k4() -> MultiGraph:
    return MultiGraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


# -- polynomial plumbing ---------------------------------------------------------

def test_multipoly_basics():
    p = (X + Y) * (X - Y)
    assert p == X * X - Y * Y
    assert p.coeff({"x": 2}) == 1
    assert p.coeff({"y": 2}) == -1
    assert p.coeff({"x": 1, "y": 1}) == 0
    assert p.eval({"x": F(3), "y": F(2)}) == 5
    assert (X ** 3).partial("x") == 3 * X ** 2
    assert (X * Y).substitute_zero("y") == MultiPoly()
    assert (X * Y + X).substitute_zero("y") == X
    assert (X * Y).is_homogeneous(2)
    assert not (X + Y * Y).is_homogeneous()
    assert (X + Y).variables() == {"x", "y"}
    with pytest.raises(ValueError):
        MultiPoly({(("x", -1),): F(1)})
    with pytest.raises(ValueError):
        X ** -1
    with pytest.raises(ValueError):
        (X + Y).eval({"x": F(1)})


# -- multigraph plumbing ---------------------------------------------------------

def test_multigraph_minors_track_edge_variables():
    g = MultiGraph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.evars == (1, 2, 3)
    d = g.delete(1)
    assert d.edges == ((0, 1), (0, 2))
    assert d.evars == (1, 3)
    c = g.contract(0)
    assert c.n == 2
    assert c.evars == (2, 3)
    # contracting a self-loop just deletes it
    h = MultiGraph(2, [(0, 0), (0, 1)])
    assert h.contract(0).edges == ((0, 1),)
    with pytest.raises(ValueError):
        MultiGraph(2, [(0, 2)])


def test_multigraph_connectivity_helpers():
    g = MultiGraph(4, [(0, 1), (2, 3)])
    assert not g.is_connected()
    assert g.component_count() == 2
    comps = g.components()
    assert sorted(c.n for c in comps) == [2, 2]
    path = MultiGraph(3, [(0, 1), (1, 2)])
    assert path.is_bridge(0) and path.is_bridge(1)
    assert not triangle().is_bridge(0)


def test_canonical_key_is_isomorphism_invariant():
    g = MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    h = MultiGraph(4, [(2, 0), (0, 3), (3, 1), (2, 1)])  # relabeled 4-cycle
    assert g.canonical_key() == h.canonical_key()
    assert g.canonical_key() != MultiGraph(4, [(0, 1), (1, 2), (2, 3)]).canonical_key()


# -- Tutte ------------------------------------------------------------------------

def test_tutte_anchor_values():
    assert tutte(MultiGraph(1, [])) == MultiPoly.const(1)
    # a tree is a product of bridges
    assert tutte(tree_to_graph(ladder(4))) == X ** 3
    # a bouquet of loops
    assert tutte(MultiGraph(1, [(0, 0), (0, 0)])) == Y ** 2
    # cycle C_n: x^(n-1) + ... + x + y
    assert tutte(triangle()) == X ** 2 + X + Y
    assert tutte(MultiGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])) == \
        X ** 3 + X ** 2 + X + Y
    # complete graph on four vertices
    want_k4 = (X ** 3 + 3 * X ** 2 + 2 * X + 4 * X * Y
               + 2 * Y + 3 * Y ** 2 + Y ** 3)
    assert tutte(k4()) == want_k4
    assert want_k4.eval({"x": F(1), "y": F(1)}) == 16


def test_tutte_multiplicative_over_components():
    g = MultiGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])
    assert tutte(g) == tutte(triangle()) * X ** 2


@pytest.mark.parametrize("max_edges", [4])
def test_tutte_matches_rank_nullity_on_corpus(max_edges):
    for g in generate_connected_multigraphs(max_edges):
        assert tutte(g) == tutte_rank_nullity(g)


def test_tutte_matches_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(2, 6)
        m = rng.randint(1, 10)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
        g = MultiGraph(n, edges)
        assert tutte(g) == tutte_rank_nullity(g)
        # absolute cross-check: at x=y=2 the rank-nullity sum counts
        # every edge subset once, so T(2,2) = 2^|E|
        t = tutte(g)
        assert t.eval({"x": F(2), "y": F(2)}) == F(2) ** g.m


def test_tutte_diagonal_counts_spanning_trees():
    for g in generate_connected_multigraphs(4):
        t11 = tutte(g).eval({"x": F(1), "y": F(1)})
        assert t11 == spanning_tree_count(g)
    assert spanning_tree_count(k4()) == 16
    assert spanning_tree_count(MultiGraph(4, [(0, 1), (2, 3)])) == 0
    assert spanning_tree_count(MultiGraph(1, [])) == 1


def test_tutte_edge_limits():
    big = MultiGraph(2, [(0, 1)] * 25)
    with pytest.raises(ValueError):
        tutte(big)
    med = MultiGraph(2, [(0, 1)] * 21)
    with pytest.raises(ValueError):
        tutte_rank_nullity(med)


def test_tree_to_graph_shapes():
    g = tree_to_graph(ladder(3))
    assert g.n == 3 and g.m == 2
    assert g.is_connected()
    cherry = Tree("g", [leaf("g"), leaf("g")])
    h = tree_to_graph(cherry)
    assert h.n == 3 and sorted(h.degree_view()) == [1, 1, 2]


def test_tutte_of_partial_sum_is_bridge_power():
    sol = solve(DSESpec((Cocycle("g", F(1)),), order=3))
    # X1 + X2 + X3 = leaf + 2*l2 + 4*l3 + cherry: edge count 0+2*1+4*2+2
    assert tutte_of_partial_sum(sol, 3) == X ** 12
    assert tutte_of_partial_sum(sol, 1) == MultiPoly.const(1)
    frac = solve(DSESpec((Cocycle("g", F(1, 2)),), order=2))
    with pytest.raises(ValueError):
        tutte_of_partial_sum(frac, 2)


def test_subtree_formula_diagnostic_disagrees():
    rep2 = tutte_subtree_formula_diagnostic(ladder(2))
    assert rep2.subtree_formula == 2 + X
    assert rep2.deletion_contraction == X
    assert not rep2.agree
    assert rep2.discrepancy == MultiPoly.const(2)

    rep3 = tutte_subtree_formula_diagnostic(ladder(3))
    assert rep3.subtree_formula == 3 + 2 * X + X ** 2 + X ** 2 * Y
    assert rep3.deletion_contraction == X ** 2
    assert not rep3.agree

    cherry = Tree("g", [leaf("g"), leaf("g")])
    repc = tutte_subtree_formula_diagnostic(cherry)
    assert repc.subtree_formula == 3 + 2 * X + X ** 2
    assert repc.deletion_contraction == X ** 2
    assert not repc.agree
    # the two shapes of three vertices are already told apart by the
    # diagnostic even though their Tutte polynomials agree
    assert rep3.subtree_formula != repc.subtree_formula


# -- Symanzik ----------------------------------------------------------------------

def w(i: int) -> MultiPoly:
    return MultiPoly.var(f"w{i}")


def test_psi_anchor_values():
    assert symanzik_psi(tree_to_graph(ladder(3))) == MultiPoly.const(1)
    assert symanzik_psi(triangle()) == w(1) + w(2) + w(3)
    assert symanzik_psi(MultiGraph(1, [(0, 0)])) == w(1)
    assert symanzik_psi(MultiGraph(2, [(0, 1), (0, 1)])) == w(1) + w(2)
    # two-loop sunset: three parallel edges
    sunset = MultiGraph(2, [(0, 1)] * 3)
    assert symanzik_psi(sunset) == (w(1) * w(2) + w(1) * w(3) + w(2) * w(3))


def test_psi_homogeneous_of_loop_degree():
    for g in generate_connected_multigraphs(4):
        psi = symanzik_psi(g)
        ell = loop_number(g)
        assert psi.is_homogeneous(ell)
        if ell == 0:
            assert psi == MultiPoly.const(1)


def test_loop_number():
    assert loop_number(triangle()) == 1
    assert loop_number(tree_to_graph(ladder(4))) == 0
    assert loop_number(MultiGraph(1, [(0, 0)])) == 1
    assert loop_number(MultiGraph(4, [(0, 1), (2, 3)])) == 0
    assert loop_number(k4()) == 3


def test_psi_disconnected_warns_and_factors():
    g = MultiGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.warns(DisconnectedNotice):
        psi = symanzik_psi(g)
    assert psi == (w(1) + w(2) + w(3)) * (w(4) + w(5) + w(6))


def test_spanning_trees_enumeration():
    trees = list(spanning_trees(triangle()))
    assert sorted(trees) == [(0, 1), (0, 2), (1, 2)]
    # self-loops never enter a spanning tree
    g = MultiGraph(2, [(0, 0), (0, 1)])
    assert list(spanning_trees(g)) == [(1,)]


def test_det_matches_psi_on_corpus():
    rng = random.Random(11)
    for g in generate_connected_multigraphs(4):
        psi = symanzik_psi(g)
        for trial in range(3):
            assignment = {v: F(rng.randint(1, 9), rng.randint(1, 9))
                          for v in g.evars}
            values = {f"w{v}": a for v, a in assignment.items()}
            got = symanzik_det(g, assignment, tree_choice=trial)
            assert got == psi.eval(values)


def test_det_requires_connected_and_full_assignment():
    with pytest.raises(ValueError):
        symanzik_det(MultiGraph(4, [(0, 1), (2, 3)]), {1: F(1), 2: F(1)})
    with pytest.raises(ValueError):
        symanzik_det(triangle(), {1: F(1), 2: F(1)})


def test_psi_deletion_contraction_split():
    rep = psi_deletion_contraction(triangle(), 0)
    assert rep.degenerate is None
    assert rep.identity_holds
    assert rep.psi == MultiPoly.var(rep.variable) * rep.deleted + rep.contracted
    bridge_rep = psi_deletion_contraction(tree_to_graph(ladder(2)), 0)
    assert bridge_rep.degenerate == "bridge"
    assert bridge_rep.identity_holds is None
    loop_rep = psi_deletion_contraction(MultiGraph(1, [(0, 0)]), 0)
    assert loop_rep.degenerate == "loop"
    with pytest.raises(ValueError):
        psi_deletion_contraction(triangle(), 3)


def test_psi_split_on_all_ordinary_corpus_edges():
    for g in generate_connected_multigraphs(3):
        for i in range(g.m):
            u, v = g.edges[i]
            if u == v or g.is_bridge(i):
                continue
            rep = psi_deletion_contraction(g, i)
            assert rep.identity_holds


# -- corpus -------------------------------------------------------------------------

def test_corpus_counts_frozen():
    graphs = generate_connected_multigraphs(4)
    by_m = {}
    for g in graphs:
        by_m[g.m] = by_m.get(g.m, 0) + 1
    assert by_m == {0: 1, 1: 2, 2: 4, 3: 11, 4: 30}


def test_corpus_graphs_are_connected_and_distinct():
    graphs = generate_connected_multigraphs(3)
    keys = [g.canonical_key() for g in graphs]
    assert len(set(keys)) == len(keys)
    for g in graphs:
        assert g.is_connected()
        assert g.m <= 3
    again = generate_connected_multigraphs(3)
    assert [g.canonical_key() for g in again] == keys


def test_corpus_rejects_negative_bound():
    with pytest.raises(ValueError):
        generate_connected_multigraphs(-1)
