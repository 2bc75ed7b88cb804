"""Minimal subtraction, toy rules, and the Birkhoff factorization.

Expected Laurent values are derived by hand from the closed form
phi(B+_d(w)) = r_d exp(-eps L) / ((|w|+1) eps) phi(w): e.g. the two-rung
ladder gives exp(-2 eps L)/(2 eps^2) whose expansion starts
1/(2 eps^2) - L/eps + L^2 - (2/3) L^3 eps + ...  The Rota-Baxter and
reconstruction identities are checked on random/exhaustive inputs rather
than assumed from the implementation.
"""

import random
from fractions import Fraction as F

import pytest

from dsegraphon.trees import ForestSum, all_forests, all_forests_up_to, ladder, leaf, Tree
from dsegraphon.hopf import antipode, convolve, coproduct
from dsegraphon.dse import Cocycle, DSESpec, solve
from dsegraphon.renorm import (BirkhoffPair, LaurentSeries, RenormReport,
                               ScalePoly, ToyRules, WindowError, birkhoff,
                               bogoliubov, counterterm, counterterm_character,
                               pole_part, renormalize_solution,
                               renormalized_value, rules_character,
                               toy_feynman_rules)


# -- scale polynomials ---------------------------------------------------------

def test_scale_poly_arithmetic():
    p = ScalePoly.L(2, F(3)) + ScalePoly.const(F(1, 2))  # 3L^2 + 1/2
    q = ScalePoly.L(1) - 1                               # L - 1
    assert (p * q).coeff(3) == 3
    assert (p * q).coeff(2) == -3
    assert (p * q).coeff(1) == F(1, 2)
    assert (p * q).coeff(0) == -F(1, 2)
    assert p.derivative() == ScalePoly.L(1, 6)
    assert p.eval(F(2)) == 12 + F(1, 2)
    assert p - p == ScalePoly()
    with pytest.raises(ValueError):
        ScalePoly({-1: F(1)})


# -- Laurent windows -----------------------------------------------------------

def test_window_rules_for_products_and_sums():
    a = LaurentSeries({-1: F(2)}, (-2, 3))
    b = LaurentSeries({1: F(5)}, (-1, 2))
    s = a + b
    assert s.window == (-2, 2)
    assert s.coeff(-1) == ScalePoly.const(2)
    assert s.coeff(1) == ScalePoly.const(5)
    p = a * b
    # product knows lo_a+lo_b; accuracy caps at min(hi_a+lo_b, lo_a+hi_b)
    assert p.window == (-3, 0)
    assert p.coeff(0) == ScalePoly.const(10)
    with pytest.raises(WindowError):
        s.coeff(3)  # truncated away by the sum
    assert a.coeff(-2) == ScalePoly()  # inside window, exactly zero


def test_window_membership_enforced():
    with pytest.raises(WindowError):
        LaurentSeries({4: F(1)}, (-2, 3))
    with pytest.raises(WindowError):
        LaurentSeries({-3: F(1)}, (-2, 3))
    with pytest.raises(ValueError):
        LaurentSeries({}, (2, -2))


def test_windowed_equality():
    a = LaurentSeries.const(1, (-2, 1))
    b = LaurentSeries.const(1, (-8, 2))
    assert a == b  # agree on the overlap, rest is truncation
    c = LaurentSeries({2: F(7)}, (-8, 2))
    assert a == b + c  # eps^2 term invisible at hi=1
    assert b != b + c


def test_pole_and_regular_split():
    s = LaurentSeries({-2: F(1), -1: ScalePoly.L(1), 0: F(3), 1: F(4)}, (-3, 2))
    assert s.pole_part() + s.regular_part() == s
    assert s.pole_part().terms.keys() == {-2, -1}
    assert not s.is_pole_free()
    assert s.regular_part().is_pole_free()


def _random_series(rng: random.Random) -> LaurentSeries:
    terms = {}
    for p in range(-3, 3):
        if rng.random() < 0.6:
            terms[p] = ScalePoly({rng.randrange(3): F(rng.randint(-9, 9),
                                                      rng.randint(1, 9))})
    return LaurentSeries(terms, (-4, 3))


def test_pole_projection_is_rota_baxter():
    # R(a)R(b) = R(R(a)b) + R(aR(b)) - R(ab) on 500 random pairs
    rng = random.Random(20240814)
    for _ in range(500):
        a = _random_series(rng)
        b = _random_series(rng)
        lhs = pole_part(a) * pole_part(b)
        rhs = (pole_part(pole_part(a) * b) + pole_part(a * pole_part(b))
               - pole_part(a * b))
        assert lhs == rhs
    # and idempotent
    s = _random_series(rng)
    assert pole_part(pole_part(s)) == pole_part(s)


# -- toy rule values -----------------------------------------------------------

def test_single_vertex_value_symbolic():
    rules = ToyRules()
    v = toy_feynman_rules(rules, leaf("g"))
    # exp(-eps L)/eps = 1/eps - L + (L^2/2) eps - (L^3/6) eps^2 + ...
    assert v.coeff(-1) == ScalePoly.const(1)
    assert v.coeff(0) == ScalePoly.L(1, -1)
    assert v.coeff(1) == ScalePoly.L(2, F(1, 2))
    assert v.coeff(2) == ScalePoly.L(3, F(-1, 6))


def test_two_rung_ladder_value_symbolic():
    v = toy_feynman_rules(ToyRules(), ladder(2))
    # exp(-2 eps L)/(2 eps^2)
    assert v.coeff(-2) == ScalePoly.const(F(1, 2))
    assert v.coeff(-1) == ScalePoly.L(1, -1)
    assert v.coeff(0) == ScalePoly.L(2, 1)
    assert v.coeff(1) == ScalePoly.L(3, F(-2, 3))


def test_cherry_value_symbolic():
    cherry = Tree("g", [leaf("g"), leaf("g")])
    v = toy_feynman_rules(ToyRules(), cherry)
    # exp(-3 eps L)/(3 eps^3)
    assert v.coeff(-3) == ScalePoly.const(F(1, 3))
    assert v.coeff(-2) == ScalePoly.L(1, -1)
    assert v.coeff(-1) == ScalePoly.L(2, F(3, 2))
    assert v.coeff(0) == ScalePoly.L(3, F(-3, 2))


def test_ladder_values_at_zero_scale():
    import math
    rules = ToyRules(scale=F(0), window=(-5, 2))
    for n in range(1, 6):
        v = toy_feynman_rules(rules, ladder(n))
        want = LaurentSeries({-n: F(1, math.factorial(n))}, (-5, 2))
        assert v == want


def test_residues_scale_values():
    rules = ToyRules(residues={"a": F(2), "b": F(1, 3)})
    va = toy_feynman_rules(rules, leaf("a"))
    vb = toy_feynman_rules(rules, leaf("b"))
    base = toy_feynman_rules(ToyRules(), leaf("g"))
    assert va == base * F(2)
    assert vb == base * F(1, 3)
    # multiplicative over a mixed forest
    both = toy_feynman_rules(rules, ForestSum.of(leaf("a")) * ForestSum.of(leaf("b")))
    assert both == base * base * F(2, 3)


def test_rules_character_is_multiplicative():
    phi = rules_character(ToyRules())
    for f in all_forests(3):
        split = LaurentSeries.const(1, (0, 11))
        for t in f:
            split = split * phi.on_tree(t)
        assert phi.on_forest(f) == split


# -- counterterms and renormalized values --------------------------------------

def test_counterterm_low_grades():
    rules = ToyRules()
    assert counterterm(rules, leaf("g")) == LaurentSeries({-1: F(-1)}, (-8, 2))
    assert counterterm(rules, ladder(2)) == LaurentSeries({-2: F(1, 2)}, (-8, 2))


def test_counterterms_are_scale_independent():
    # minimal subtraction: the L-dependence drops out of every counterterm
    rules = ToyRules()
    for f in all_forests_up_to(4):
        v = counterterm(rules, f)
        for c in v.terms.values():
            assert set(c.coeffs) <= {0}


def test_renormalized_low_grades():
    rules = ToyRules()
    r1 = renormalized_value(rules, leaf("g"))
    assert r1.is_pole_free()
    assert r1.coeff(0) == ScalePoly.L(1, -1)        # -L
    r2 = renormalized_value(rules, ladder(2))
    assert r2.is_pole_free()
    assert r2.coeff(0) == ScalePoly.L(2, F(1, 2))   # L^2/2
    assert r2.coeff(1) == ScalePoly.L(3, F(-1, 2))
    cherry = Tree("g", [leaf("g"), leaf("g")])
    r3 = renormalized_value(rules, cherry)
    assert r3.is_pole_free()


def test_renormalized_vanishes_at_zero_scale():
    rules = ToyRules(scale=F(0), window=(-4, 2))
    for f in all_forests_up_to(4):
        if f.is_empty():
            continue
        v = renormalized_value(rules, f)
        assert v.is_pole_free()
        assert v.coeff(0) == ScalePoly()


def test_pole_freeness_to_grade_five():
    rules = ToyRules(window=(-5, 1))
    sol = solve(DSESpec((Cocycle("g", F(1)),), order=5))
    for n in range(1, 6):
        assert renormalized_value(rules, sol.coefficients[n]).is_pole_free()


def test_counterterm_is_multiplicative():
    rules = ToyRules()
    fs = [f for f in all_forests_up_to(2) if not f.is_empty()]
    for a in fs:
        for b in fs:
            prod = ForestSum.of(a) * ForestSum.of(b)
            assert counterterm(rules, prod) == \
                counterterm(rules, a) * counterterm(rules, b)


def test_renormalized_equals_convolution():
    rules = ToyRules()
    sr = counterterm_character(rules)
    phi = rules_character(rules)
    for f in all_forests_up_to(4):
        assert convolve(sr, phi, f) == renormalized_value(rules, f)


def test_birkhoff_reconstruction():
    # (counterterm o antipode) * renormalized = plain rules
    rules = ToyRules()
    for f in all_forests_up_to(4):
        total = LaurentSeries.zero(rules.window)
        for (l, r), c in coproduct(ForestSum.of(f)).terms.items():
            left = counterterm(rules, antipode(ForestSum.of(l)))
            right = renormalized_value(rules, r)
            total = total + left * right * c
        assert total == toy_feynman_rules(rules, f)


def test_bogoliubov_plus_counterterm():
    rules = ToyRules()
    for f in all_forests_up_to(3):
        assert bogoliubov(rules, f) + counterterm(rules, f) == \
            renormalized_value(rules, f)


def test_birkhoff_pair_bundles_both_factors():
    rules = ToyRules()
    pair = birkhoff(rules, ladder(2))
    assert isinstance(pair, BirkhoffPair)
    assert pair.negative == counterterm(rules, ladder(2))
    assert pair.positive == renormalized_value(rules, ladder(2))


def test_scale_derivative_exact_vs_difference():
    # coefficients are polynomial in L, so a central difference with a
    # quadratic-exactness step reproduces the derivative exactly
    rules = ToyRules()
    v = renormalized_value(rules, leaf("g"))
    d = v.scale_derivative()
    assert d.coeff(0) == ScalePoly.const(-1)
    h = F(1, 7)
    fd = (v.eval_scale(h).coeff(0).eval(0) - v.eval_scale(-h).coeff(0).eval(0)) / (2 * h)
    assert fd == d.coeff(0).eval(0)
    # same check on the two-rung ladder at a nonzero base point: degree <= 2
    # in the finite part, so the central difference is again exact
    w = renormalized_value(rules, ladder(2))
    base = F(1, 3)
    fd2 = (w.eval_scale(base + h).coeff(0).eval(0)
           - w.eval_scale(base - h).coeff(0).eval(0)) / (2 * h)
    assert fd2 == w.scale_derivative().coeff(0).eval(base)


# -- window policy -------------------------------------------------------------

def test_rules_window_must_contain_zero():
    with pytest.raises(ValueError):
        ToyRules(window=(1, 2))
    with pytest.raises(ValueError):
        ToyRules(window=(-3, -1))


def test_narrow_window_raises_with_required_floor():
    rules = ToyRules(window=(-2, 2))
    with pytest.raises(WindowError) as exc:
        toy_feynman_rules(rules, ladder(3))
    assert "-3" in str(exc.value)
    with pytest.raises(WindowError):
        counterterm(rules, ladder(3))


def test_renormalize_solution_widens_and_reports():
    sol = solve(DSESpec((Cocycle("g", F(1)),), order=4))
    rules = ToyRules(window=(-2, 2))
    rep = renormalize_solution(rules, sol, 4)
    assert isinstance(rep, RenormReport)
    assert rep.widened
    assert rep.window == (-4, 2)
    assert rep.order == 4
    assert rep.scale_symbolic
    assert rules.window == (-2, 2)  # caller's rules untouched
    assert len(rep.renormalized) == 4
    for v in rep.renormalized:
        assert v.is_pole_free()
    # grade n counterterm has its deepest pole at eps^-n
    assert rep.counterterms[3].coeff(-4) != ScalePoly()


def test_renormalize_solution_strict_window():
    sol = solve(DSESpec((Cocycle("g", F(1)),), order=4))
    rules = ToyRules(window=(-2, 2))
    with pytest.raises(WindowError) as exc:
        renormalize_solution(rules, sol, 4, widen=False)
    assert "-4" in str(exc.value)
    rep = renormalize_solution(rules, sol, 2, widen=False)
    assert not rep.widened
    assert rep.window == (-2, 2)


def test_renormalize_solution_range_check():
    sol = solve(DSESpec((Cocycle("g", F(1)),), order=3))
    rules = ToyRules()
    with pytest.raises(ValueError):
        renormalize_solution(rules, sol, 0)
    with pytest.raises(ValueError):
        renormalize_solution(rules, sol, 4)
