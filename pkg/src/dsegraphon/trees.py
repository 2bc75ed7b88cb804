"""Decorated non-planar rooted trees, forests and their linear combinations.

Trees are immutable and canonical by construction: children are stored
sorted by their canonical string codes, so two trees are equal iff they
are isomorphic as decorated rooted trees.  A forest is a multiset of
trees (again kept sorted), and a ForestSum is a finite rational linear
combination of forests.  ForestSums form a commutative algebra under
juxtaposition of forests; the empty forest is the unit.

Decorations are plain nonempty strings.  The characters ``[``, ``]`` and
``|`` are reserved for the canonical encoding and rejected in labels.

The grading used everywhere in this package is the total number of
vertices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

_RESERVED = set("[]|")


def check_decoration(label: str) -> str:
    if not isinstance(label, str) or not label:
        raise ValueError("decoration label must be a nonempty string")
    if _RESERVED & set(label):
        raise ValueError("decoration label may not contain '[', ']' or '|'")
    return label


class Tree:
    """A decorated rooted tree with unordered children."""

    __slots__ = ("label", "children", "code", "size", "_hash")

    def __init__(self, label: str, children: Iterable["Tree"] = ()):
        check_decoration(label)
        kids = tuple(sorted(children, key=lambda c: c.code))
        for k in kids:
            if not isinstance(k, Tree):
                raise TypeError("children must be Tree instances")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", kids)
        code = label + "[" + "".join(k.code for k in kids) + "]"
        object.__setattr__(self, "code", code)
        object.__setattr__(self, "size", 1 + sum(k.size for k in kids))
        object.__setattr__(self, "_hash", hash(code))

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    def __eq__(self, other):
        return isinstance(other, Tree) and self.code == other.code

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Tree"):
        return self.code < other.code

    @property
    def edge_count(self) -> int:
        return self.size - 1

    def decorations(self) -> set[str]:
        out = {self.label}
        for k in self.children:
            out |= k.decorations()
        return out

    def __repr__(self):
        if not self.children:
            return f"Tree({self.label!r})"
        return f"Tree({self.label!r}, {list(self.children)!r})"

    def __str__(self):
        if not self.children:
            return self.label
        return self.label + "(" + ",".join(str(k) for k in self.children) + ")"


def leaf(label: str) -> Tree:
    """Single-vertex tree."""
    return Tree(label)


def ladder(n: int, label: str = "g") -> Tree:
    """Chain of ``n`` vertices, root at one end, all with the same label."""
    if n < 1:
        raise ValueError("ladder needs at least one vertex")
    t = Tree(label)
    for _ in range(n - 1):
        t = Tree(label, (t,))
    return t


class Forest:
    """A finite multiset of trees; the monomials of the tree algebra."""

    __slots__ = ("trees", "code", "grade", "_hash")

    def __init__(self, trees: Iterable[Tree] = ()):
        ts = tuple(sorted(trees, key=lambda t: t.code))
        object.__setattr__(self, "trees", ts)
        object.__setattr__(self, "code", "".join(t.code for t in ts))
        object.__setattr__(self, "grade", sum(t.size for t in ts))
        object.__setattr__(self, "_hash", hash(("forest", self.code)))

    def __setattr__(self, name, value):
        raise AttributeError("Forest is immutable")

    def __eq__(self, other):
        return isinstance(other, Forest) and self.code == other.code

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Forest"):
        return self.code < other.code

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    def __mul__(self, other: "Forest") -> "Forest":
        if not isinstance(other, Forest):
            return NotImplemented
        return Forest(self.trees + other.trees)

    def is_empty(self) -> bool:
        return not self.trees

    def __repr__(self):
        return f"Forest({list(self.trees)!r})"

    def __str__(self):
        return " ".join(str(t) for t in self.trees) if self.trees else "1"


EMPTY_FOREST = Forest()


def _as_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class ForestSum:
    """Rational linear combination of forests.

    Supports ``+``, ``-``, multiplication (concatenation product, with
    scalars accepted on either side) and integer powers.  Zero
    coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Forest, Fraction] | None = None):
        clean: dict[Forest, Fraction] = {}
        if terms:
            for f, c in terms.items():
                if not isinstance(f, Forest):
                    raise TypeError("keys must be Forests")
                c = _as_coeff(c)
                if c:
                    clean[f] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ForestSum is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero() -> "ForestSum":
        return ForestSum()

    @staticmethod
    def unit() -> "ForestSum":
        return ForestSum({EMPTY_FOREST: Fraction(1)})

    @staticmethod
    def of(x, coeff=1) -> "ForestSum":
        """Lift a Tree or Forest to a one-term sum."""
        if isinstance(x, Tree):
            x = Forest((x,))
        if not isinstance(x, Forest):
            raise TypeError("expected Tree or Forest")
        return ForestSum({x: _as_coeff(coeff)})

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ForestSum):
            return NotImplemented
        out = dict(self.terms)
        for f, c in other.terms.items():
            s = out.get(f, Fraction(0)) + c
            if s:
                out[f] = s
            else:
                out.pop(f, None)
        return ForestSum(out)

    def __neg__(self):
        return ForestSum({f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ForestSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_coeff(other)
            return ForestSum({f: c * v for f, v in self.terms.items()}) if c else ForestSum()
        if isinstance(other, ForestSum):
            out: dict[Forest, Fraction] = {}
            for f1, c1 in self.terms.items():
                for f2, c2 in other.terms.items():
                    f = f1 * f2
                    s = out.get(f, Fraction(0)) + c1 * c2
                    if s:
                        out[f] = s
                    else:
                        out.pop(f, None)
            return ForestSum(out)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("powers must be nonnegative integers")
        out = ForestSum.unit()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, ForestSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection --------------------------------------------------------

    def coeff(self, f) -> Fraction:
        if isinstance(f, Tree):
            f = Forest((f,))
        return self.terms.get(f, Fraction(0))

    def counit(self) -> Fraction:
        """Coefficient of the empty forest."""
        return self.terms.get(EMPTY_FOREST, Fraction(0))

    def grades(self) -> dict[int, "ForestSum"]:
        """Split into homogeneous components keyed by vertex count."""
        out: dict[int, dict[Forest, Fraction]] = {}
        for f, c in self.terms.items():
            out.setdefault(f.grade, {})[f] = c
        return {g: ForestSum(d) for g, d in sorted(out.items())}

    def homogeneous_part(self, n: int) -> "ForestSum":
        return ForestSum({f: c for f, c in self.terms.items() if f.grade == n})

    def max_grade(self) -> int:
        return max((f.grade for f in self.terms), default=0)

    def is_homogeneous(self, n: int | None = None) -> bool:
        gs = {f.grade for f in self.terms}
        if n is None:
            return len(gs) <= 1
        return gs <= {n}

    def __repr__(self):
        if not self.terms:
            return "ForestSum(0)"
        bits = []
        for f, c in sorted(self.terms.items(), key=lambda kv: (kv[0].grade, kv[0].code)):
            bits.append(f"{c}*{f}")
        return "ForestSum(" + " + ".join(bits) + ")"


# -- enumeration -----------------------------------------------------------
#
# Used by tests and diagnostics; counting distinct shapes against known
# values doubles as a correctness check of the canonical encoding.

def all_trees(n: int, labels: tuple[str, ...] = ("g",)) -> list[Tree]:
    """All distinct decorated rooted trees with exactly ``n`` vertices."""
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    return _trees_memo(n, tuple(labels))


_TREE_CACHE: dict[tuple[int, tuple[str, ...]], list[Tree]] = {}


def _trees_memo(n: int, labels: tuple[str, ...]) -> list[Tree]:
    key = (n, labels)
    if key in _TREE_CACHE:
        return _TREE_CACHE[key]
    if n == 0:
        out: list[Tree] = []
    else:
        out = []
        for forest in _forests_memo(n - 1, labels):
            for lab in labels:
                out.append(Tree(lab, forest.trees))
        out = sorted(set(out), key=lambda t: t.code)
    _TREE_CACHE[key] = out
    return out


_FOREST_CACHE: dict[tuple[int, tuple[str, ...]], list[Forest]] = {}


def all_forests(n: int, labels: tuple[str, ...] = ("g",)) -> list[Forest]:
    """All distinct forests with exactly ``n`` vertices in total."""
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    return _forests_memo(n, tuple(labels))


def _forests_memo(n: int, labels: tuple[str, ...]) -> list[Forest]:
    key = (n, labels)
    if key in _FOREST_CACHE:
        return _FOREST_CACHE[key]
    if n == 0:
        res = [EMPTY_FOREST]
    else:
        # multisets of trees of total size n: pick the code-largest tree
        # first to avoid generating permutations of the same multiset
        seen: set[Forest] = set()
        for k in range(1, n + 1):
            for t in _trees_memo(k, labels):
                for rest in _forests_memo(n - k, labels):
                    if rest.trees and rest.trees[-1].code > t.code:
                        continue
                    seen.add(Forest(rest.trees + (t,)))
        res = sorted(seen, key=lambda f: f.code)
    _FOREST_CACHE[key] = res
    return res


def all_forests_up_to(n: int, labels: tuple[str, ...] = ("g",)) -> list[Forest]:
    out: list[Forest] = []
    for k in range(n + 1):
        out.extend(all_forests(k, labels))
    return out
