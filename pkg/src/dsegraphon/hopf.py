"""Hopf-algebra structure on decorated rooted forests.

The coproduct is the admissible-cut coproduct written with the root part
in the LEFT tensor factor and the pruned forest in the RIGHT one:

    delta(t) = t (x) 1  +  1 (x) t  +  sum_c R_c(t) (x) P_c(t)

Everything downstream (reduced coproduct, antipode recursion,
convolution, characters) uses this factor order consistently.  In this
order the grafting operator B+ satisfies the one-cocycle identity with
B+ acting on the LEFT factor:

    delta(B+(x)) = (B+ (x) id) delta(x)  +  1 (x) B+(x)

which the test suite verifies exhaustively on low grades; the mirrored
form with B+ on the right factor fails already at two vertices attached
to a common root.

All maps are linear in ForestSum and exact over the rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .trees import EMPTY_FOREST, Forest, ForestSum, Tree, _as_coeff


class TensorSum:
    """Rational linear combination of pairs of forests ``left (x) right``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Forest, Forest], Fraction] | None = None):
        clean: dict[tuple[Forest, Forest], Fraction] = {}
        if terms:
            for k, c in terms.items():
                c = _as_coeff(c)
                if c:
                    clean[k] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TensorSum is immutable")

    @staticmethod
    def zero() -> "TensorSum":
        return TensorSum()

    @staticmethod
    def unit() -> "TensorSum":
        return TensorSum({(EMPTY_FOREST, EMPTY_FOREST): Fraction(1)})

    @staticmethod
    def of(left: Forest, right: Forest, coeff=1) -> "TensorSum":
        return TensorSum({(left, right): _as_coeff(coeff)})

    def __add__(self, other):
        if not isinstance(other, TensorSum):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorSum(out)

    def __neg__(self):
        return TensorSum({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Componentwise product, or scalar multiple."""
        if isinstance(other, (int, Fraction)):
            c = _as_coeff(other)
            return TensorSum({k: c * v for k, v in self.terms.items()}) if c else TensorSum()
        if isinstance(other, TensorSum):
            out: dict[tuple[Forest, Forest], Fraction] = {}
            for (l1, r1), c1 in self.terms.items():
                for (l2, r2), c2 in other.terms.items():
                    k = (l1 * l2, r1 * r2)
                    s = out.get(k, Fraction(0)) + c1 * c2
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            return TensorSum(out)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, left: Forest, right: Forest) -> Fraction:
        return self.terms.get((left, right), Fraction(0))

    def map_left(self, fn) -> "TensorSum":
        """Apply a ForestSum-valued linear map to the left factor."""
        out = TensorSum()
        for (l, r), c in self.terms.items():
            img = fn(l)
            out = out + TensorSum({(f, r): c * v for f, v in img.terms.items()})
        return out

    def map_right(self, fn) -> "TensorSum":
        out = TensorSum()
        for (l, r), c in self.terms.items():
            img = fn(r)
            out = out + TensorSum({(l, f): c * v for f, v in img.terms.items()})
        return out

    def swap(self) -> "TensorSum":
        return TensorSum({(r, l): c for (l, r), c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "TensorSum(0)"
        bits = []
        for (l, r), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0].code, kv[0][1].code)):
            bits.append(f"{c}*({l} (x) {r})")
        return "TensorSum(" + " + ".join(bits) + ")"


# -- grafting ---------------------------------------------------------------

def graft(label: str, x) -> ForestSum:
    """B+ operator: attach every forest of ``x`` to a fresh ``label`` root.

    Linear, raises the grade by exactly one.
    """
    x = _as_forest_sum(x)
    out: dict[Forest, Fraction] = {}
    for f, c in x.terms.items():
        t = Tree(label, f.trees)
        k = Forest((t,))
        out[k] = out.get(k, Fraction(0)) + c
    return ForestSum(out)


def _as_forest_sum(x) -> ForestSum:
    if isinstance(x, ForestSum):
        return x
    if isinstance(x, (Tree, Forest)):
        return ForestSum.of(x)
    raise TypeError("expected Tree, Forest or ForestSum")


# -- coproduct ---------------------------------------------------------------

_COPROD_CACHE: dict[Tree, TensorSum] = {}


def _coproduct_tree(t: Tree) -> TensorSum:
    got = _COPROD_CACHE.get(t)
    if got is not None:
        return got
    # delta(B+(f)) = (B+ (x) id) delta(f) + 1 (x) B+(f)
    d = TensorSum.unit()
    for child in t.children:
        d = d * _coproduct_tree(child)
    out = dict(d.map_left(lambda fo: graft(t.label, ForestSum.of(fo))).terms)
    k = (EMPTY_FOREST, Forest((t,)))
    out[k] = out.get(k, Fraction(0)) + 1
    res = TensorSum(out)
    _COPROD_CACHE[t] = res
    return res


def coproduct(x) -> TensorSum:
    """Admissible-cut coproduct, root part left, pruned forest right."""
    x = _as_forest_sum(x)
    out = TensorSum()
    for f, c in x.terms.items():
        d = TensorSum.unit()
        for t in f.trees:
            d = d * _coproduct_tree(t)
        out = out + d * c
    return out


def reduced_coproduct(x) -> TensorSum:
    """Coproduct with the two primitive terms ``x (x) 1`` and ``1 (x) x`` removed."""
    x = _as_forest_sum(x)
    full = coproduct(x)
    trimmed = dict(full.terms)
    for f, c in x.terms.items():
        for k in ((f, EMPTY_FOREST), (EMPTY_FOREST, f)):
            s = trimmed.get(k, Fraction(0)) - c
            if s:
                trimmed[k] = s
            else:
                trimmed.pop(k, None)
    return TensorSum(trimmed)


def counit(x) -> Fraction:
    return _as_forest_sum(x).counit()


# -- antipode ----------------------------------------------------------------

_ANTIPODE_CACHE: dict[Tree, ForestSum] = {}


def _antipode_tree(t: Tree) -> ForestSum:
    got = _ANTIPODE_CACHE.get(t)
    if got is not None:
        return got
    # S(t) = -t - sum' S(left) * right over the reduced coproduct
    acc = -ForestSum.of(t)
    for (l, r), c in reduced_coproduct(ForestSum.of(t)).terms.items():
        acc = acc - c * (_antipode_forest(l) * ForestSum.of(r))
    _ANTIPODE_CACHE[t] = acc
    return acc


def _antipode_forest(f: Forest) -> ForestSum:
    out = ForestSum.unit()
    for t in f.trees:
        out = out * _antipode_tree(t)
    return out


def antipode(x) -> ForestSum:
    """Antipode, computed by the usual grade recursion.

    Multiplicative over forests; satisfies m (S (x) id) delta = counit * unit,
    which the tests check exhaustively on low grades.
    """
    x = _as_forest_sum(x)
    out = ForestSum.zero()
    for f, c in x.terms.items():
        out = out + c * _antipode_forest(f)
    return out


# -- characters and convolution ----------------------------------------------

class Character:
    """Algebra morphism from forests into a commutative target algebra.

    ``rule`` gives the value on a single tree; values on forests are the
    products of the tree values and the empty forest maps to ``one``.
    ``target`` is a tag used to refuse convolution of characters landing
    in different algebras.
    """

    def __init__(self, rule, one, target: str, name: str = ""):
        self.rule = rule
        self.one = one
        self.target = target
        self.name = name
        self._tree_cache: dict[Tree, object] = {}

    def on_tree(self, t: Tree):
        got = self._tree_cache.get(t)
        if got is None:
            got = self.rule(t)
            self._tree_cache[t] = got
        return got

    def on_forest(self, f: Forest):
        val = self.one
        for t in f.trees:
            val = val * self.on_tree(t)
        return val

    def __call__(self, x):
        x = _as_forest_sum(x)
        total = None
        for f, c in x.terms.items():
            term = self.on_forest(f) * c
            total = term if total is None else total + term
        if total is None:
            return self.one * Fraction(0)
        return total

    def __repr__(self):
        return f"Character({self.name or self.target})"


def convolve(f: Character, g: Character, x):
    """Convolution product (f * g)(x) = sum f(x_1) g(x_2) over the coproduct."""
    if f.target != g.target:
        raise ValueError(f"cannot convolve characters with targets {f.target!r} and {g.target!r}")
    xs = _as_forest_sum(x)
    total = f.one * Fraction(0)
    for (l, r), c in coproduct(xs).terms.items():
        total = total + (f.on_forest(l) * g.on_forest(r)) * c
    return total


def rational_character(rule, name: str = "") -> Character:
    return Character(rule, Fraction(1), "rational", name)
