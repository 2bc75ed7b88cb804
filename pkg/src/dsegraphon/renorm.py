"""Minimal-subtraction renormalization with toy Feynman rules.

Values of the rules live in truncated Laurent series in the regulator
``eps`` whose coefficients are exact rational polynomials in the scale
``L`` (kept symbolic unless the rules fix a rational value).  A series
carries a window [lo, hi]: coefficients of eps^p for p in the window are
exact, everything above hi is unknown truncation and reading it raises,
everything below lo is exactly zero.

The toy rules assign to a grafting of a subforest w

    phi(B+_d(w)) = r_d * exp(-eps*L) / ((|w|+1) * eps) * phi(w)

extended multiplicatively over forests, with phi(1) = 1.  With residues
r_d = 1 and L = 0 this gives the ladder values 1/(n! eps^n).

Minimal subtraction keeps the strict pole part; the projection is an
idempotent Rota-Baxter operator, which makes the grade-recursive
counterterm a character and the renormalized values pole free.  The
recursions run over the reduced coproduct of `hopf`, whose left factor
carries the root part; the counterterm recurses into that factor and the
plain rules evaluate the pruned one.  The Birkhoff reconstruction
invariant (counterterm o antipode) * renormalized = plain rules pins
this convention down; it is enforced in the tests rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .trees import Forest, ForestSum, Tree, _as_coeff
from .hopf import Character, convolve, reduced_coproduct, _as_forest_sum


class WindowError(ValueError):
    """Raised when a requested coefficient lies outside the exact window."""


class ScalePoly:
    """Polynomial in the scale L with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for k, v in coeffs.items():
                if k < 0:
                    raise ValueError("polynomial powers must be nonnegative")
                v = _as_coeff(v)
                if v:
                    clean[k] = v
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ScalePoly is immutable")

    @staticmethod
    def const(c) -> "ScalePoly":
        return ScalePoly({0: _as_coeff(c)})

    @staticmethod
    def L(power: int = 1, coeff=1) -> "ScalePoly":
        return ScalePoly({power: _as_coeff(coeff)})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalePoly.const(other)
        if not isinstance(other, ScalePoly):
            return NotImplemented
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ScalePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalePoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalePoly.const(other)
        if not isinstance(other, ScalePoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_coeff(other)
            return ScalePoly({k: c * v for k, v in self.coeffs.items()}) if c else ScalePoly()
        if not isinstance(other, ScalePoly):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                s = out.get(k1 + k2, Fraction(0)) + v1 * v2
                if s:
                    out[k1 + k2] = s
                else:
                    out.pop(k1 + k2, None)
        return ScalePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalePoly.const(other)
        return isinstance(other, ScalePoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def derivative(self) -> "ScalePoly":
        return ScalePoly({k - 1: k * v for k, v in self.coeffs.items() if k >= 1})

    def eval(self, value) -> Fraction:
        value = _as_coeff(value)
        return sum((v * value ** k for k, v in self.coeffs.items()), Fraction(0))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            if k == 0:
                bits.append(f"{v}")
            elif k == 1:
                bits.append(f"{v}*L")
            else:
                bits.append(f"{v}*L^{k}")
        return " + ".join(bits)


class LaurentSeries:
    """Truncated Laurent series in eps with ScalePoly coefficients."""

    __slots__ = ("terms", "lo", "hi")

    def __init__(self, terms: dict[int, ScalePoly] | None = None,
                 window: tuple[int, int] = (-8, 2)):
        lo, hi = window
        if lo > hi:
            raise ValueError(f"empty window {window}")
        clean: dict[int, ScalePoly] = {}
        if terms:
            for p, c in terms.items():
                if isinstance(c, (int, Fraction)):
                    c = ScalePoly.const(c)
                if not isinstance(c, ScalePoly):
                    raise TypeError("coefficients must be ScalePoly or rationals")
                if not c:
                    continue
                if p < lo or p > hi:
                    raise WindowError(
                        f"power eps^{p} outside window [{lo}, {hi}]")
                clean[p] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @staticmethod
    def const(c, window=(-8, 2)) -> "LaurentSeries":
        return LaurentSeries({0: ScalePoly.const(c)}, window)

    @staticmethod
    def zero(window=(-8, 2)) -> "LaurentSeries":
        return LaurentSeries({}, window)

    def coeff(self, p: int) -> ScalePoly:
        """Exact coefficient of eps^p; reading beyond the window raises."""
        if p > self.hi:
            raise WindowError(
                f"coefficient of eps^{p} is truncated (window [{self.lo}, {self.hi}])")
        return self.terms.get(p, ScalePoly())

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.const(other, self.window)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo = min(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        out: dict[int, ScalePoly] = {}
        for p in set(self.terms) | set(other.terms):
            if p > hi:
                continue
            c = self.terms.get(p, ScalePoly()) + other.terms.get(p, ScalePoly())
            if c:
                out[p] = c
        return LaurentSeries(out, (lo, hi))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({p: -c for p, c in self.terms.items()}, self.window)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.const(other, self.window)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ScalePoly)):
            if isinstance(other, ScalePoly) and not other:
                return LaurentSeries({}, self.window)
            return LaurentSeries({p: c * other for p, c in self.terms.items()},
                                 self.window)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, self.lo + other.hi)
        out: dict[int, ScalePoly] = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                p = p1 + p2
                if p > hi:
                    continue
                s = out.get(p, ScalePoly()) + c1 * c2
                if s:
                    out[p] = s
                else:
                    out.pop(p, None)
        return LaurentSeries(out, (lo, hi))

    __rmul__ = __mul__

    def __eq__(self, other):
        """Equal where both sides are exact: coefficients agree up to the
        smaller hi (below the smaller lo both are zero by construction)."""
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.const(other, self.window)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        hi = min(self.hi, other.hi)
        lo = min(self.lo, other.lo)
        for p in range(lo, hi + 1):
            if self.terms.get(p, ScalePoly()) != other.terms.get(p, ScalePoly()):
                return False
        return True

    def __hash__(self):
        raise TypeError("LaurentSeries is unhashable (window-relative equality)")

    def __bool__(self):
        return bool(self.terms)

    def pole_part(self) -> "LaurentSeries":
        """Strict pole part: terms with negative powers of eps."""
        return LaurentSeries({p: c for p, c in self.terms.items() if p < 0},
                             self.window)

    def regular_part(self) -> "LaurentSeries":
        return LaurentSeries({p: c for p, c in self.terms.items() if p >= 0},
                             self.window)

    def is_pole_free(self) -> bool:
        return not any(p < 0 for p in self.terms)

    def eval_scale(self, value) -> "LaurentSeries":
        """Substitute a rational value for the symbolic scale L."""
        return LaurentSeries(
            {p: ScalePoly.const(c.eval(value)) for p, c in self.terms.items()},
            self.window)

    def scale_derivative(self) -> "LaurentSeries":
        """d/dL applied coefficientwise."""
        return LaurentSeries({p: c.derivative() for p, c in self.terms.items()},
                             self.window)

    def __repr__(self):
        if not self.terms:
            return f"LaurentSeries(0; window={self.window})"
        bits = []
        for p in sorted(self.terms):
            bits.append(f"({self.terms[p]})*eps^{p}")
        return "LaurentSeries(" + " + ".join(bits) + f"; window={self.window})"


def pole_part(s: LaurentSeries) -> LaurentSeries:
    """Minimal-subtraction projection R: keep only negative powers.

    Idempotent and Rota-Baxter: R(a)R(b) = R(R(a)b) + R(aR(b)) - R(ab).
    """
    return s.pole_part()


# -- toy rules ----------------------------------------------------------------

@dataclass
class ToyRules:
    """Configuration of the toy Feynman rules.

    ``residues`` maps decorations to rational residues r_d (default 1);
    ``scale`` fixes L to a rational value, or keeps it symbolic if None;
    ``window`` is the eps-window of reported values.  The window must
    reach at least as low as -grade for every evaluated element, else a
    WindowError names the required lower end.
    """

    residues: dict[str, Fraction] = field(default_factory=dict)
    scale: Fraction | None = None
    window: tuple[int, int] = (-8, 2)

    def __post_init__(self):
        self.residues = {d: _as_coeff(r) for d, r in self.residues.items()}
        if self.scale is not None:
            self.scale = _as_coeff(self.scale)
        lo, hi = self.window
        if lo > 0 or hi < 0:
            raise ValueError("rules window must contain eps^0")
        self._tree_cache: dict[Tree, LaurentSeries] = {}
        self._ct_cache: dict[Forest, LaurentSeries] = {}
        # internal expansion of exp(-eps L), wide enough that grade-many
        # products still cover the configured window exactly
        self._exp_order = hi - lo + 1

    def residue(self, d: str) -> Fraction:
        return self.residues.get(d, Fraction(1))

    def _exp_factor(self) -> LaurentSeries:
        terms: dict[int, ScalePoly] = {}
        for k in range(self._exp_order + 1):
            c = Fraction((-1) ** k, math.factorial(k))
            if self.scale is None:
                terms[k] = ScalePoly.L(k, c)
            else:
                v = c * self.scale ** k
                if v:
                    terms[k] = ScalePoly.const(v)
        return LaurentSeries(terms, (0, self._exp_order))


def toy_feynman_rules(rules: ToyRules, x) -> LaurentSeries:
    """Evaluate the toy rules character on a Tree, Forest or ForestSum."""
    xs = _as_forest_sum(x)
    needed = xs.max_grade()
    if -needed < rules.window[0]:
        raise WindowError(
            f"window {rules.window} too narrow for grade {needed}: "
            f"lower end must be <= {-needed}")
    total = LaurentSeries.zero(rules.window)
    for f, c in xs.terms.items():
        total = total + _rules_on_forest(rules, f) * c
    return _clamp(total, rules.window)


def _clamp(s: LaurentSeries, window: tuple[int, int]) -> LaurentSeries:
    lo, hi = window
    lo = min(lo, min((p for p in s.terms), default=lo))
    hi_eff = min(hi, s.hi)
    return LaurentSeries({p: c for p, c in s.terms.items() if p <= hi_eff},
                         (lo, hi_eff))


def _rules_on_forest(rules: ToyRules, f: Forest) -> LaurentSeries:
    val = LaurentSeries.const(1, (0, rules._exp_order))
    for t in f.trees:
        val = val * _rules_on_tree(rules, t)
    return val


def _rules_on_tree(rules: ToyRules, t: Tree) -> LaurentSeries:
    got = rules._tree_cache.get(t)
    if got is not None:
        return got
    sub = Forest(t.children)
    inner = _rules_on_forest(rules, sub)
    pref = rules._exp_factor() * LaurentSeries(
        {-1: ScalePoly.const(Fraction(rules.residue(t.label), sub.grade + 1))},
        (-1, -1 + rules._exp_order))
    val = pref * inner
    rules._tree_cache[t] = val
    return val


def rules_character(rules: ToyRules) -> Character:
    """The toy rules packaged as a character with Laurent target."""
    return Character(lambda t: _rules_on_tree(rules, t),
                     LaurentSeries.const(1, (0, rules._exp_order)),
                     target="laurent", name="phi")


# -- BPHZ ----------------------------------------------------------------------

def counterterm(rules: ToyRules, x) -> LaurentSeries:
    """Minimal-subtraction counterterm, recursive over the reduced coproduct:

        S(x) = -R( phi(x) + sum' S(x'_root) phi(x'_pruned) )

    Defined on any forest directly by the recursion; that it agrees with
    the product of its tree values (i.e. is a character) is a theorem
    checked in the tests, not an implementation shortcut.
    """
    xs = _as_forest_sum(x)
    needed = xs.max_grade()
    if -needed < rules.window[0]:
        raise WindowError(
            f"window {rules.window} too narrow for grade {needed}: "
            f"lower end must be <= {-needed}")
    total = LaurentSeries.zero(rules.window)
    for f, c in xs.terms.items():
        total = total + _counterterm_forest(rules, f) * c
    return _clamp(total, rules.window)


def _counterterm_forest(rules: ToyRules, f: Forest) -> LaurentSeries:
    if f.is_empty():
        return LaurentSeries.const(1, (0, rules._exp_order))
    got = rules._ct_cache.get(f)
    if got is not None:
        return got
    acc = _rules_on_forest(rules, f)
    for (l, r), c in reduced_coproduct(ForestSum.of(f)).terms.items():
        acc = acc + _counterterm_forest(rules, l) * _rules_on_forest(rules, r) * c
    val = -pole_part(acc)
    rules._ct_cache[f] = val
    return val


def counterterm_character(rules: ToyRules) -> Character:
    return Character(lambda t: _counterterm_forest(rules, Forest((t,))),
                     LaurentSeries.const(1, (0, rules._exp_order)),
                     target="laurent", name="phi_minus")


def bogoliubov(rules: ToyRules, x) -> LaurentSeries:
    """Preparation map: phi(x) + sum' S(x'_root) phi(x'_pruned)."""
    xs = _as_forest_sum(x)
    total = LaurentSeries.zero(rules.window)
    for f, c in xs.terms.items():
        acc = _rules_on_forest(rules, f)
        for (l, r), cc in reduced_coproduct(ForestSum.of(f)).terms.items():
            acc = acc + _counterterm_forest(rules, l) * _rules_on_forest(rules, r) * cc
        total = total + acc * c
    return _clamp(total, rules.window)


def renormalized_value(rules: ToyRules, x) -> LaurentSeries:
    """Renormalized value: Bogoliubov preparation plus counterterm.

    Equals the convolution (counterterm * rules)(x); pole free by the
    Birkhoff factorization, which is asserted here as a consistency
    guard.
    """
    val = bogoliubov(rules, x) + counterterm(rules, x)
    if not val.is_pole_free():
        raise ArithmeticError(
            f"internal consistency failure: renormalized value has poles: {val!r}")
    return val


@dataclass(frozen=True)
class BirkhoffPair:
    """Values of the two Birkhoff factors on one element."""

    negative: LaurentSeries
    positive: LaurentSeries


def birkhoff(rules: ToyRules, x) -> BirkhoffPair:
    """Birkhoff splitting of the rules on ``x``: pole-only and regular parts.

    The negative factor is the counterterm character, the positive one
    the renormalized value; reconstruction (negative o antipode) *
    positive = rules holds in convolution and is covered by tests.
    """
    return BirkhoffPair(negative=counterterm(rules, x),
                        positive=renormalized_value(rules, x))


@dataclass(frozen=True)
class RenormReport:
    """Gradewise renormalization of a truncated equation solution.

    ``window`` is the window actually used; when it differs from the
    one configured in the rules, automatic widening kicked in.
    """

    order: int
    scale_symbolic: bool
    window: tuple[int, int]
    widened: bool
    renormalized: tuple[LaurentSeries, ...]
    counterterms: tuple[LaurentSeries, ...]


def renormalize_solution(rules: ToyRules, sol, m: int,
                         widen: bool = True) -> RenormReport:
    """Renormalize X_1..X_m of a solution; entry i-1 holds grade i.

    A window too narrow for grade m is widened automatically (and the
    report says so); with ``widen=False`` it raises instead, naming the
    exponent the window must reach.
    """
    if m < 1 or m > sol.order:
        raise ValueError(f"grade range 1..{m} outside solved range 1..{sol.order}")
    lo, hi = rules.window
    widened = False
    if -m < lo:
        if not widen:
            raise WindowError(
                f"window [{lo}, {hi}] cannot hold grade-{m} poles; "
                f"lower the window floor to {-m} or below")
        rules = ToyRules(residues=dict(rules.residues), scale=rules.scale,
                         window=(-m, hi))
        widened = True
    ren = []
    cts = []
    for n in range(1, m + 1):
        xn = sol.coefficients[n]
        ren.append(renormalized_value(rules, xn))
        cts.append(counterterm(rules, xn))
    return RenormReport(order=m, scale_symbolic=rules.scale is None,
                        window=rules.window, widened=widened,
                        renormalized=tuple(ren), counterterms=tuple(cts))
