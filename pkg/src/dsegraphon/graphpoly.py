"""Tutte polynomials and Kirchhoff-Symanzik polynomials of multigraphs.

Multigraphs allow parallel edges and self-loops.  Each edge carries a
stable variable index so that deletion and contraction keep the naming
of Symanzik variables intact.

The Tutte polynomial is computed by deletion-contraction with the
highest-index ordinary edge pivoted first, splitting into connected
components, and memoizing minors under a relabeling-invariant
certificate.  An independent rank-nullity sum over all edge subsets is
provided as an oracle.  The memo key is always produced by relabeling
the actual minor, so a cache hit can only identify isomorphic graphs;
an incomplete search for the smallest labeling merely costs cache hits,
never correctness.

The first Kirchhoff-Symanzik polynomial is the spanning-tree sum
Psi(w) = sum_T prod_{e not in T} w_e, homogeneous of degree equal to the
loop number.  It factors over components (spanning forests) and equals
the determinant of the cycle-basis matrix M with entries
M_kr = sum_i w_i eta_ik eta_ir, for any choice of spanning tree.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .trees import Tree, _as_coeff

TUTTE_EDGE_LIMIT = 24
RANK_NULLITY_EDGE_LIMIT = 20
_CANON_CAP = 40320  # max labelings tried per minor


class DisconnectedNotice(UserWarning):
    """Emitted when a per-component product stands in for a connected input."""


# -- multivariate polynomials -------------------------------------------------

class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms are keyed by sorted tuples of (variable, exponent) pairs; the
    empty key is the constant term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[tuple[str, int], ...], Fraction] | None = None):
        clean: dict[tuple[tuple[str, int], ...], Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = _as_coeff(c)
                if not c:
                    continue
                mono = tuple(sorted((v, e) for v, e in mono if e))
                if any(e < 0 for _, e in mono):
                    raise ValueError("exponents must be nonnegative")
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @staticmethod
    def const(c) -> "MultiPoly":
        return MultiPoly({(): _as_coeff(c)})

    @staticmethod
    def var(name: str, exp: int = 1, coeff=1) -> "MultiPoly":
        return MultiPoly({((name, exp),): _as_coeff(coeff)})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_coeff(other)
            return MultiPoly({k: c * v for k, v in self.terms.items()}) if c else MultiPoly()
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out: dict[tuple[tuple[str, int], ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps: dict[str, int] = {}
                for v, e in m1 + m2:
                    exps[v] = exps.get(v, 0) + e
                key = tuple(sorted(exps.items()))
                s = out.get(key, Fraction(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("powers must be nonnegative integers")
        out = MultiPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, mono: dict[str, int]) -> Fraction:
        key = tuple(sorted((v, e) for v, e in mono.items() if e))
        return self.terms.get(key, Fraction(0))

    def eval(self, values: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for v, e in mono:
                if v not in values:
                    raise ValueError(f"no value supplied for variable {v!r}")
                term *= _as_coeff(values[v]) ** e
            total += term
        return total

    def substitute_zero(self, name: str) -> "MultiPoly":
        """Drop every term containing ``name``."""
        return MultiPoly({m: c for m, c in self.terms.items()
                          if all(v != name for v, _ in m)})

    def partial(self, name: str) -> "MultiPoly":
        out: dict[tuple[tuple[str, int], ...], Fraction] = {}
        for mono, c in self.terms.items():
            exps = dict(mono)
            e = exps.get(name, 0)
            if not e:
                continue
            exps[name] = e - 1
            key = tuple(sorted((v, k) for v, k in exps.items() if k))
            out[key] = out.get(key, Fraction(0)) + c * e
        return MultiPoly(out)

    def variables(self) -> set[str]:
        return {v for mono in self.terms for v, _ in mono}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e for _, e in mono) for mono in self.terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (sum(e for _, e in m), m)):
            c = self.terms[mono]
            if not mono:
                bits.append(f"{c}")
                continue
            vs = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            bits.append(vs if c == 1 else f"{c}*{vs}")
        return " + ".join(bits)


# -- multigraphs ---------------------------------------------------------------

class MultiGraph:
    """Multigraph on vertices 0..n-1 with loops and parallel edges.

    ``evars`` are the stable Symanzik variable indices of the edges
    (1-based positions by default); minors keep them.
    """

    __slots__ = ("n", "edges", "evars")

    def __init__(self, n: int, edges, evars=None):
        if not isinstance(n, int) or n < 0:
            raise ValueError("vertex count must be a nonnegative integer")
        es = []
        for (u, v) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            es.append((min(u, v), max(u, v)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(es))
        if evars is None:
            evars = tuple(range(1, len(es) + 1))
        else:
            evars = tuple(evars)
            if len(evars) != len(es):
                raise ValueError("evars length must match edge count")
        object.__setattr__(self, "evars", evars)

    def __setattr__(self, name, value):
        raise AttributeError("MultiGraph is immutable")

    def __eq__(self, other):
        return (isinstance(other, MultiGraph) and self.n == other.n
                and self.edges == other.edges and self.evars == other.evars)

    def __hash__(self):
        return hash((self.n, self.edges, self.evars))

    def __repr__(self):
        return f"MultiGraph(n={self.n}, edges={list(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def delete(self, i: int) -> "MultiGraph":
        es = self.edges[:i] + self.edges[i + 1:]
        ev = self.evars[:i] + self.evars[i + 1:]
        return MultiGraph(self.n, es, ev)

    def contract(self, i: int) -> "MultiGraph":
        """Contract edge i (identify endpoints, drop the edge itself)."""
        u, v = self.edges[i]
        if u == v:
            return self.delete(i)
        relabel = {}
        nxt = 0
        for w in range(self.n):
            if w == v:
                continue
            relabel[w] = nxt
            nxt += 1
        relabel[v] = relabel[u]
        es = []
        ev = []
        for j, (a, b) in enumerate(self.edges):
            if j == i:
                continue
            es.append((relabel[a], relabel[b]))
            ev.append(self.evars[j])
        return MultiGraph(self.n - 1, es, ev)

    def degree_view(self) -> list[int]:
        deg = [0] * self.n
        for (u, v) in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def component_count(self, edge_subset=None) -> int:
        dsu = _DSU(self.n)
        edges = self.edges if edge_subset is None else [self.edges[i] for i in edge_subset]
        for (u, v) in edges:
            dsu.union(u, v)
        return dsu.count

    def is_connected(self) -> bool:
        return self.n <= 1 or self.component_count() == 1

    def components(self) -> list["MultiGraph"]:
        dsu = _DSU(self.n)
        for (u, v) in self.edges:
            dsu.union(u, v)
        groups: dict[int, list[int]] = {}
        for w in range(self.n):
            groups.setdefault(dsu.find(w), []).append(w)
        out = []
        for verts in groups.values():
            index = {w: i for i, w in enumerate(verts)}
            vset = set(verts)
            es = []
            ev = []
            for j, (u, v) in enumerate(self.edges):
                if u in vset:
                    es.append((index[u], index[v]))
                    ev.append(self.evars[j])
            out.append(MultiGraph(len(verts), es, ev))
        return out

    def is_bridge(self, i: int) -> bool:
        u, v = self.edges[i]
        if u == v:
            return False
        dsu = _DSU(self.n)
        for j, (a, b) in enumerate(self.edges):
            if j != i:
                dsu.union(a, b)
        return dsu.find(u) != dsu.find(v)

    def canonical_key(self):
        """Relabeling-invariant certificate (best effort, always sound)."""
        return _canonical_key(self)


class _DSU:
    __slots__ = ("parent", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        self.count -= 1
        return True


def _refine_colors(g: MultiGraph) -> list[int]:
    loops = [0] * g.n
    adj: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for (u, v) in g.edges:
        if u == v:
            loops[u] += 1
        else:
            adj[u][v] = adj[u].get(v, 0) + 1
            adj[v][u] = adj[v].get(u, 0) + 1
    sig0 = [(loops[w], sum(adj[w].values())) for w in range(g.n)]
    rank0 = {s: i for i, s in enumerate(sorted(set(sig0)))}
    colors = [rank0[s] for s in sig0]
    for _ in range(g.n):
        sig = [
            (colors[w], loops[w], tuple(sorted((colors[u], mult) for u, mult in adj[w].items())))
            for w in range(g.n)
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranking[s] for s in sig]
        if new == colors:
            break
        colors = new
    return colors


def _canonical_key(g: MultiGraph):
    colors = _refine_colors(g)
    cells: dict[int, list[int]] = {}
    for w, c in enumerate(colors):
        cells.setdefault(c, []).append(w)
    ordered_cells = [cells[c] for c in sorted(cells)]
    total = 1
    for cell in ordered_cells:
        for i in range(2, len(cell) + 1):
            total *= i
        if total > _CANON_CAP:
            break
    if total > _CANON_CAP:
        # deterministic single labeling; still a true relabeling of g
        order = [w for cell in ordered_cells for w in cell]
        return (g.n, _edge_code(g, order))
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(c) for c in ordered_cells)):
        order = [w for part in perm_parts for w in part]
        code = _edge_code(g, order)
        if best is None or code < best:
            best = code
    return (g.n, best)


def _edge_code(g: MultiGraph, order: list[int]):
    pos = [0] * g.n
    for i, w in enumerate(order):
        pos[w] = i
    return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for (u, v) in g.edges))


# -- Tutte polynomial ----------------------------------------------------------

_TUTTE_CACHE: dict[object, MultiPoly] = {}


def tutte(g: MultiGraph) -> MultiPoly:
    """Tutte polynomial by deletion-contraction.

    Empty edge set gives 1; a bridge contributes a factor x, a loop a
    factor y, and the polynomial is multiplicative over connected
    components (and hence over disjoint unions and one-point joins).
    """
    if g.m > TUTTE_EDGE_LIMIT:
        raise ValueError(f"graph has {g.m} edges, limit is {TUTTE_EDGE_LIMIT}")
    return _tutte_rec(g)


def _tutte_rec(g: MultiGraph) -> MultiPoly:
    if not g.edges:
        return MultiPoly.const(1)
    comps = [c for c in g.components() if c.m]
    if len(comps) > 1:
        out = MultiPoly.const(1)
        for c in comps:
            out = out * _tutte_rec(c)
        return out
    g = comps[0]
    key = _canonical_key(g)
    got = _TUTTE_CACHE.get(key)
    if got is not None:
        return got
    pivot = None
    loops = 0
    bridges = 0
    for i in range(g.m - 1, -1, -1):
        u, v = g.edges[i]
        if u == v:
            loops += 1
        elif g.is_bridge(i):
            bridges += 1
        elif pivot is None:
            pivot = i
    if pivot is None:
        res = MultiPoly.var("x", 1) ** bridges * MultiPoly.var("y", 1) ** loops
    else:
        res = _tutte_rec(g.delete(pivot)) + _tutte_rec(g.contract(pivot))
    _TUTTE_CACHE[key] = res
    return res


def tutte_rank_nullity(g: MultiGraph) -> MultiPoly:
    """Independent oracle: the rank-nullity expansion over all edge subsets.

    T(G;x,y) = sum_{A <= E} (x-1)^(r(E)-r(A)) (y-1)^(n(A)) with
    r(A) = |V| - components(A) and n(A) = |A| - r(A).
    """
    if g.m > RANK_NULLITY_EDGE_LIMIT:
        raise ValueError(f"graph has {g.m} edges, oracle limit is {RANK_NULLITY_EDGE_LIMIT}")
    xm1 = MultiPoly.var("x") - 1
    ym1 = MultiPoly.var("y") - 1
    r_full = g.n - g.component_count()
    # cache small powers
    xp = [MultiPoly.const(1)]
    yp = [MultiPoly.const(1)]
    for _ in range(g.n + 1):
        xp.append(xp[-1] * xm1)
    for _ in range(g.m + 1):
        yp.append(yp[-1] * ym1)
    total = MultiPoly()
    for bits in range(1 << g.m):
        subset = [i for i in range(g.m) if bits >> i & 1]
        r = g.n - g.component_count(subset)
        nullity = len(subset) - r
        total = total + xp[r_full - r] * yp[nullity]
    return total


def tree_to_graph(t: Tree) -> MultiGraph:
    """Underlying multigraph of a rooted tree (root gets index 0)."""
    edges = []
    counter = [0]

    def walk(node: Tree, idx: int):
        for child in node.children:
            counter[0] += 1
            cidx = counter[0]
            edges.append((idx, cidx))
            walk(child, cidx)

    walk(t, 0)
    return MultiGraph(counter[0] + 1, edges)


def tutte_of_partial_sum(sol, m: int) -> MultiPoly:
    """Tutte polynomial of the disjoint union underlying Y_m.

    The structural sum X_1 + ... + X_m must have nonnegative integer
    coefficients; each coefficient-c forest monomial contributes its
    trees' Tutte polynomials to the power c.  For trees every edge is a
    bridge, so the result is a power of x with exponent the total edge
    count.
    """
    from .dse import structural_sum
    y = structural_sum(sol, m)
    out = MultiPoly.const(1)
    for forest, c in sorted(y.terms.items(), key=lambda kv: kv[0].code):
        if c.denominator != 1 or c < 0:
            raise ValueError(f"coefficient {c} is not a nonnegative integer")
        for t in forest:
            out = out * tutte(tree_to_graph(t)) ** int(c)
    return out


@dataclass(frozen=True)
class SubtreeFormulaReport:
    """Diagnostic comparison of the subtree-sum formula against
    deletion-contraction on a rooted tree.

    The subtree sum runs over all subtrees s of the underlying tree
    (connected subgraphs with at least one edge, plus the single-vertex
    subtrees counted with zero edges and zero leaves) and adds
    x^|E(s)| (y+1)^(|E(s)|-|L(s)|), where L(s) counts the childless
    vertices of s under the root orientation; that reading keeps the
    exponents nonnegative.  The sum does not satisfy the bridge rule,
    so it generally disagrees with the Tutte polynomial.  The report
    carries both values and their difference.
    """

    tree: Tree
    subtree_formula: MultiPoly
    deletion_contraction: MultiPoly
    agree: bool

    @property
    def discrepancy(self) -> MultiPoly:
        return self.subtree_formula - self.deletion_contraction


def tutte_subtree_formula_diagnostic(t: Tree) -> SubtreeFormulaReport:
    """Evaluate the subtree-sum expression for T(t;x,y) and compare it
    with the deletion-contraction value.  Diagnostic only."""
    g = tree_to_graph(t)
    n = g.n
    adj: list[list[int]] = [[] for _ in range(n)]
    for (u, v) in g.edges:
        adj[u].append(v)
        adj[v].append(u)

    ypl = MultiPoly.var("y") + 1
    total = MultiPoly()
    # single-vertex subtrees: no edges, no leaves
    total = total + MultiPoly.const(n)
    # connected edge subsets (subtrees of a tree = connected subgraphs)
    for r in range(1, len(g.edges) + 1):
        for subset in itertools.combinations(range(g.m), r):
            verts = set()
            for i in subset:
                u, v = g.edges[i]
                verts.add(u)
                verts.add(v)
            dsu = _DSU(n)
            joins = 0
            for i in subset:
                u, v = g.edges[i]
                if dsu.union(u, v):
                    joins += 1
            if joins != len(verts) - 1:
                continue
            children: dict[int, int] = {}
            for i in subset:
                u, v = g.edges[i]  # stored parent-first by tree_to_graph
                children[u] = children.get(u, 0) + 1
            leaves = sum(1 for w in verts if children.get(w, 0) == 0)
            total = total + MultiPoly.var("x", r) * ypl ** (r - leaves)
    dc = tutte(g)
    return SubtreeFormulaReport(tree=t, subtree_formula=total,
                                deletion_contraction=dc, agree=total == dc)


# -- Kirchhoff-Symanzik polynomials ---------------------------------------------

def _wvar(i: int) -> str:
    return f"w{i}"


def spanning_trees(g: MultiGraph):
    """Yield spanning trees of a connected multigraph as index tuples."""
    need = g.n - 1
    if need < 0:
        return
    for subset in itertools.combinations(range(g.m), need):
        dsu = _DSU(g.n)
        ok = True
        for i in subset:
            u, v = g.edges[i]
            if u == v or not dsu.union(u, v):
                ok = False
                break
        if ok and dsu.count == 1:
            yield subset


def symanzik_psi(g: MultiGraph) -> MultiPoly:
    """First Symanzik polynomial: sum over spanning trees of the product
    of the complementary edge variables.

    Disconnected graphs are handled per component (spanning forests) and
    multiplied, with a notice.
    """
    comps = g.components()
    if len(comps) > 1:
        warnings.warn("disconnected graph: Symanzik polynomial computed per "
                      "component and multiplied", DisconnectedNotice,
                      stacklevel=2)
    out = MultiPoly.const(1)
    for comp in comps:
        part = MultiPoly()
        for tree in spanning_trees(comp):
            tset = set(tree)
            mono = MultiPoly.const(1)
            for j in range(comp.m):
                if j not in tset:
                    mono = mono * MultiPoly.var(_wvar(comp.evars[j]))
            part = part + mono
        out = out * part
    return out


def loop_number(g: MultiGraph) -> int:
    return g.m - g.n + g.component_count()


def symanzik_det(g: MultiGraph, assignment: dict[int, Fraction],
                 tree_choice: int = 0) -> Fraction:
    """Evaluate Psi via the cycle-basis determinant.

    ``assignment`` maps edge variable indices to rational values.  The
    fundamental cycle basis comes from a greedy spanning tree; different
    ``tree_choice`` values rotate the edge scan order, changing the
    basis but (provably, and tested) not the determinant.
    """
    if not g.is_connected():
        raise ValueError("cycle-basis determinant needs a connected graph")
    w = [None] * g.m
    for j in range(g.m):
        var = g.evars[j]
        if var not in assignment:
            raise ValueError(f"no value assigned to edge variable w{var}")
        w[j] = _as_coeff(assignment[var])

    order = list(range(g.m))
    if g.m:
        shift = tree_choice % g.m
        order = order[shift:] + order[:shift]
    dsu = _DSU(g.n)
    tree_edges = []
    rest = []
    for j in order:
        u, v = g.edges[j]
        if u != v and dsu.union(u, v):
            tree_edges.append(j)
        else:
            rest.append(j)

    # children structure of the chosen tree, rooted at 0
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for j in tree_edges:
        u, v = g.edges[j]
        adj[u].append((v, j))
        adj[v].append((u, j))
    parent = [-1] * g.n
    parent_edge = [-1] * g.n
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    topo = [0]
    while stack:
        u = stack.pop()
        for (v, j) in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                parent_edge[v] = j
                stack.append(v)
                topo.append(v)
    depth = [0] * g.n
    for u in topo[1:]:
        depth[u] = depth[parent[u]] + 1

    # eta[k][j] = +-1 if edge j lies (with orientation) on cycle k
    ell = len(rest)
    eta = [dict() for _ in range(ell)]
    for k, j in enumerate(rest):
        u, v = g.edges[j]
        eta[k][j] = 1
        if u == v:
            continue
        # tree path from v back to u; edge (a,b) traversed a->b counts
        # +1 when it matches the stored orientation (min,max)
        a, b = v, u
        while a != b:
            if depth[a] >= depth[b]:
                je = parent_edge[a]
                pu, pv = g.edges[je]
                step = (a, parent[a])
                sign = 1 if step == (pu, pv) else -1
                eta[k][je] = eta[k].get(je, 0) + sign
                a = parent[a]
            else:
                je = parent_edge[b]
                pu, pv = g.edges[je]
                step = (parent[b], b)
                sign = 1 if step == (pu, pv) else -1
                eta[k][je] = eta[k].get(je, 0) + sign
                b = parent[b]

    mat = [[Fraction(0)] * ell for _ in range(ell)]
    for k in range(ell):
        for r in range(k, ell):
            s = Fraction(0)
            for j, sk in eta[k].items():
                sr = eta[r].get(j)
                if sr:
                    s += w[j] * sk * sr
            mat[k][r] = s
            mat[r][k] = s
    return _det_fraction(mat)


def _det_fraction(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    mat = [row[:] for row in mat]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if mat[r][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for r in range(c + 1, n):
            if mat[r][c]:
                f = mat[r][c] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
    return det


@dataclass(frozen=True)
class PsiSplitReport:
    """Deletion-contraction split of Psi at one edge.

    For an ordinary edge, psi == w_e * deleted + contracted holds with
    deleted = Psi(G-e) = dPsi/dw_e and contracted = Psi(G/e) = Psi at
    w_e = 0.  For bridges and self-loops the identity degenerates and
    ``degenerate`` names the case.
    """

    edge_index: int
    variable: str
    psi: MultiPoly
    deleted: MultiPoly
    contracted: MultiPoly
    identity_holds: bool | None
    degenerate: str | None


def psi_deletion_contraction(g: MultiGraph, i: int) -> PsiSplitReport:
    if not (0 <= i < g.m):
        raise ValueError(f"edge index {i} out of range")
    u, v = g.edges[i]
    degenerate = None
    if u == v:
        degenerate = "loop"
    elif g.is_bridge(i):
        degenerate = "bridge"
    var = _wvar(g.evars[i])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedNotice)
        psi = symanzik_psi(g)
        deleted = symanzik_psi(g.delete(i))
        contracted = symanzik_psi(g.contract(i))
    holds = None
    if degenerate is None:
        holds = psi == MultiPoly.var(var) * deleted + contracted
    return PsiSplitReport(edge_index=i, variable=var, psi=psi,
                          deleted=deleted, contracted=contracted,
                          identity_holds=holds, degenerate=degenerate)


def spanning_tree_count(g: MultiGraph) -> int:
    """Spanning trees via the matrix-tree cofactor; 0 if disconnected."""
    if g.n == 0:
        return 0
    if not g.is_connected():
        return 0
    if g.n == 1:
        return 1
    lap = [[Fraction(0)] * g.n for _ in range(g.n)]
    for (u, v) in g.edges:
        if u == v:
            continue
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    minor = [row[1:] for row in lap[1:]]
    det = _det_fraction(minor)
    assert det.denominator == 1
    return int(det)


# -- corpus generation -----------------------------------------------------------

def generate_connected_multigraphs(max_edges: int) -> list[MultiGraph]:
    """All connected multigraphs with at most ``max_edges`` edges, up to
    isomorphism, grown one edge at a time from a single vertex.

    Every connected multigraph with e+1 edges has a removable edge (a
    non-cut edge, or the pendant edge of a degree-1 vertex) whose removal
    leaves a connected multigraph with e edges, so edge growth reaches
    everything.
    """
    if max_edges < 0:
        raise ValueError("edge bound must be nonnegative")
    seed = MultiGraph(1, [])
    seen = {(_canonical_key(seed)): seed}
    frontier = [seed]
    for _ in range(max_edges):
        nxt = []
        for g in frontier:
            candidates = []
            for u in range(g.n):
                for v in range(u, g.n):
                    candidates.append(MultiGraph(g.n, list(g.edges) + [(u, v)]))
                candidates.append(
                    MultiGraph(g.n + 1, list(g.edges) + [(u, g.n)]))
            for h in candidates:
                key = _canonical_key(h)
                if key not in seen:
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
    return sorted(seen.values(), key=lambda g: (g.m, g.n, _canonical_key(g)[1]))
