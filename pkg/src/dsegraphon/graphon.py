"""Step-function graphons: construction, cut metric, densities, sampling.

A step graphon is a symmetric block-constant function on [0,1]^2 with
rational block measures and rational values in [0,1].  Everything that
can be exact is exact: cut norms in exact mode, homomorphism densities,
Gateaux derivatives and refinements all run over the rationals.

Cut norm follows the block form of the rectangle supremum,

    cut_norm(W) = max_{S,T}  | sum_{i in S, j in T} mu_i mu_j W_ij |

over all pairs of block subsets.  Exact mode decomposes the support
into connected components (the maximum splits across components) and
enumerates subsets per component with Gray-code updates; heuristic mode
runs randomized alternating maximization and certifies the best pair it
finds with exact arithmetic, so it reports a true lower bound.

Cut distance minimizes the cut norm of the difference over block
permutations after refining both graphons to a common equal-measure
partition.  Whenever the identity alignment already attains the
permutation-invariant lower bound |total mass difference|, that value
is returned as the provable exact minimum without any search; this is
what makes the rescaling diagnostics exact even at twenty blocks.

Sampling uses a counter-based generator keyed by the master seed, so a
sample is reproducible regardless of how the work would be scheduled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .trees import Forest, ForestSum, _as_coeff
from .graphpoly import tree_to_graph

EXACT_CUTNORM_BLOCK_LIMIT = 20
EXACT_DISTANCE_BLOCK_LIMIT = 8
HEURISTIC_RESTARTS = 32
_EXACT_COMPONENT_CAP = 16  # exact norm per support component in distance search


class SizeError(ValueError):
    """Exact mode requested beyond its size guard."""


class RefinementError(ValueError):
    """Two graphons cannot be aligned on a common equal-measure partition."""


class StepGraphon:
    """Symmetric block step function with rational measures and values."""

    __slots__ = ("measures", "values", "k")

    def __init__(self, measures, values, _direction: bool = False):
        mu = tuple(_as_coeff(m) for m in measures)
        if not mu:
            raise ValueError("graphon needs at least one block")
        if any(m <= 0 for m in mu):
            raise ValueError("block measures must be positive")
        if sum(mu) != 1:
            raise ValueError(f"block measures sum to {sum(mu)}, expected 1")
        vals = tuple(tuple(_as_coeff(v) for v in row) for row in values)
        k = len(mu)
        if len(vals) != k or any(len(row) != k for row in vals):
            raise ValueError("value matrix shape must match the number of blocks")
        for i in range(k):
            for j in range(k):
                if vals[i][j] != vals[j][i]:
                    raise ValueError("value matrix must be symmetric")
                if not _direction and not (0 <= vals[i][j] <= 1):
                    raise ValueError("graphon values must lie in [0,1]")
        object.__setattr__(self, "measures", mu)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("StepGraphon is immutable")

    def __eq__(self, other):
        return (isinstance(other, StepGraphon) and self.measures == other.measures
                and self.values == other.values)

    def __hash__(self):
        return hash((self.measures, self.values))

    def __repr__(self):
        return f"StepGraphon(k={self.k}, measures={[str(m) for m in self.measures]})"

    @staticmethod
    def constant(c, k: int = 1) -> "StepGraphon":
        c = _as_coeff(c)
        mu = [Fraction(1, k)] * k
        return StepGraphon(mu, [[c] * k for _ in range(k)])

    def is_constant(self) -> bool:
        v = self.values[0][0]
        return all(x == v for row in self.values for x in row)

    def total_mass(self) -> Fraction:
        return sum(self.measures[i] * self.measures[j] * self.values[i][j]
                   for i in range(self.k) for j in range(self.k))

    def permute(self, perm) -> "StepGraphon":
        """Relabel blocks: block i of the result is block perm[i] of self."""
        if sorted(perm) != list(range(self.k)):
            raise ValueError("not a permutation of the blocks")
        mu = [self.measures[perm[i]] for i in range(self.k)]
        vals = [[self.values[perm[i]][perm[j]] for j in range(self.k)]
                for i in range(self.k)]
        return StepGraphon(mu, vals)

    def boundaries(self) -> list[Fraction]:
        acc = Fraction(0)
        out = [acc]
        for m in self.measures:
            acc += m
            out.append(acc)
        return out


def _trusted_graphon(measures: tuple, values: tuple) -> StepGraphon:
    """Internal constructor for matrices already known to be valid;
    skips the quadratic symmetry/range validation."""
    w = StepGraphon.__new__(StepGraphon)
    object.__setattr__(w, "measures", measures)
    object.__setattr__(w, "values", values)
    object.__setattr__(w, "k", len(measures))
    return w


def direction(measures, values) -> StepGraphon:
    """A symmetric step function used as a perturbation direction; values
    may leave [0,1]."""
    return StepGraphon(measures, values, _direction=True)


# -- simple graphs --------------------------------------------------------------

class SimpleGraph:
    """Simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges):
        if not isinstance(n, int) or n < 0:
            raise ValueError("vertex count must be a nonnegative integer")
        es = set()
        for (u, v) in edges:
            if u == v:
                raise ValueError("simple graphs have no loops")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
            es.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(es)))

    def __setattr__(self, name, value):
        raise AttributeError("SimpleGraph is immutable")

    def __eq__(self, other):
        return (isinstance(other, SimpleGraph) and self.n == other.n
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, edges={list(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def canonical_code(self) -> str:
        """Labeling-invariant encoding: smallest edge list over relabelings."""
        if self.n > 8:
            raise SizeError("canonical codes supported up to 8 vertices")
        best = None
        verts = range(self.n)
        for perm in itertools.permutations(verts):
            code = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v]))
                                for (u, v) in self.edges))
            if best is None or code < best:
                best = code
        return f"{self.n}:" + ",".join(f"{u}-{v}" for (u, v) in best)

    def disjoint_union(self, other: "SimpleGraph") -> "SimpleGraph":
        shifted = [(u + self.n, v + self.n) for (u, v) in other.edges]
        return SimpleGraph(self.n + other.n, list(self.edges) + shifted)


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def graphon_from_graph(g: SimpleGraph) -> StepGraphon:
    """Equal blocks of measure 1/n with the adjacency matrix as values."""
    if g.n == 0:
        raise ValueError("empty graph has no graphon")
    vals = [[Fraction(0)] * g.n for _ in range(g.n)]
    for (u, v) in g.edges:
        vals[u][v] = Fraction(1)
        vals[v][u] = Fraction(1)
    return _trusted_graphon((Fraction(1, g.n),) * g.n,
                            tuple(tuple(row) for row in vals))


# -- Feynman graphons ------------------------------------------------------------

def feynman_graphon(y: ForestSum, coupling) -> StepGraphon:
    """Diagonal-block graphon model of a forest sum.

    Each grade-n monomial with integer coefficient c contributes c
    copies of its forest adjacency pattern as diagonal blocks with edge
    value (coupling)^n clipped to [0,1]; block measures are proportional
    to vertex counts (every vertex cell gets measure 1/total).
    """
    coupling = _as_coeff(coupling)
    if not (0 < coupling <= 1):
        raise ValueError("coupling must lie in (0, 1]")
    monomials = []
    total = 0
    for f, c in sorted(y.terms.items(), key=lambda kv: (kv[0].grade, kv[0].code)):
        if c.denominator != 1 or c < 0:
            raise ValueError(
                f"forest sum must have nonnegative integer coefficients, got {c}")
        if f.grade == 0:
            raise ValueError("the empty forest has no graphon block")
        monomials.append((f, int(c)))
        total += f.grade * int(c)
    if total == 0:
        raise ValueError("cannot build a graphon from the zero sum")
    vals = [[Fraction(0)] * total for _ in range(total)]
    offset = 0
    for f, c in monomials:
        value = coupling ** f.grade
        if value > 1:
            value = Fraction(1)
        for _ in range(c):
            for t in f:
                g = tree_to_graph(t)
                for (u, v) in g.edges:
                    vals[offset + u][offset + v] = value
                    vals[offset + v][offset + u] = value
                offset += g.n
    return _trusted_graphon((Fraction(1, total),) * total,
                            tuple(tuple(row) for row in vals))


# -- cut norm ---------------------------------------------------------------------

def _mass_matrix(w: StepGraphon) -> list[list[Fraction]]:
    return [[w.measures[i] * w.measures[j] * w.values[i][j] for j in range(w.k)]
            for i in range(w.k)]


def _support_components(mat: list[list[Fraction]]) -> list[list[int]]:
    k = len(mat)
    seen = [False] * k
    comps = []
    for s in range(k):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(k):
                if not seen[v] and (mat[u][v] or mat[v][u]):
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _component_extrema(mat: list[list[Fraction]], comp: list[int]):
    """(max, min) of sum_{i in S, j in T} mat[i][j] over S,T subsets of comp."""
    p = len(comp)
    sub = [[mat[a][b] for b in comp] for a in comp]
    colsum = [Fraction(0)] * p
    pos = Fraction(0)  # sum_j max(0, colsum_j)
    neg = Fraction(0)  # sum_j min(0, colsum_j)
    best_max = Fraction(0)
    best_min = Fraction(0)
    state = 0
    for step in range(1, 1 << p):
        flip = (step ^ (step >> 1)) ^ ((step - 1) ^ ((step - 1) >> 1))
        r = flip.bit_length() - 1
        sign = -1 if state >> r & 1 else 1
        state ^= 1 << r
        row = sub[r]
        for j in range(p):
            v = row[j]
            if not v:
                continue
            old = colsum[j]
            new = old + v if sign > 0 else old - v
            colsum[j] = new
            if old > 0:
                pos -= old
            elif old < 0:
                neg -= old
            if new > 0:
                pos += new
            elif new < 0:
                neg += new
        if pos > best_max:
            best_max = pos
        if neg < best_min:
            best_min = neg
    return best_max, best_min


def _cut_norm_exact_matrix(mat: list[list[Fraction]]) -> Fraction:
    comps = _support_components(mat)
    total_max = Fraction(0)
    total_min = Fraction(0)
    for comp in comps:
        if len(comp) == 1:
            i = comp[0]
            v = mat[i][i]
            if v > 0:
                total_max += v
            elif v < 0:
                total_min += v
            continue
        cmax, cmin = _component_extrema(mat, comp)
        total_max += cmax
        total_min += cmin
    return max(total_max, -total_min)


def _heuristic_pair(mf: np.ndarray, rng, restarts: int):
    """Alternating maximization of |s·M·t| over subset indicator pairs.

    Returns (float value, s, t); the caller certifies the pair exactly.
    """
    k = mf.shape[0]
    best_val = -1.0
    best_pair = (np.ones(k, bool), np.ones(k, bool))
    for sign in (1.0, -1.0):
        m = sign * mf
        starts = [np.ones(k, bool)]
        for _ in range(restarts):
            starts.append(rng.integers(0, 2, k).astype(bool))
        for s in starts:
            for _ in range(40):
                t = m.T @ s > 0
                s_new = m @ t > 0
                if (s_new == s).all():
                    break
                s = s_new
            t = m.T @ s > 0
            val = float(s @ m @ t)
            if val > best_val:
                best_val = val
                best_pair = (s.copy(), t.copy())
    return best_val, best_pair[0], best_pair[1]


def _cut_norm_heuristic_matrix(mat, restarts: int, seed: int) -> Fraction:
    """Randomized search on floats, exact evaluation of the chosen pair."""
    mf = np.array([[float(v) for v in row] for row in mat])
    rng = np.random.Generator(np.random.Philox(key=seed))
    _, s, t = _heuristic_pair(mf, rng, restarts)
    total = Fraction(0)
    for i in np.flatnonzero(s):
        row = mat[int(i)]
        for j in np.flatnonzero(t):
            total += row[int(j)]
    return abs(total)


def cut_norm(w: StepGraphon, mode: str = "exact", *, seed: int = 0,
             restarts: int = HEURISTIC_RESTARTS):
    """Cut norm of a step graphon.

    Exact mode enumerates block subsets (limit 20 blocks) and returns a
    Fraction; heuristic mode returns the exactly-evaluated best pair
    found by alternating maximization, a certified lower bound.
    """
    if mode == "exact":
        if w.k > EXACT_CUTNORM_BLOCK_LIMIT:
            raise SizeError(
                f"exact cut norm limited to {EXACT_CUTNORM_BLOCK_LIMIT} blocks "
                f"(got {w.k}); use heuristic mode")
        return _cut_norm_exact_matrix(_mass_matrix(w))
    if mode == "heuristic":
        return _cut_norm_heuristic_matrix(_mass_matrix(w), restarts, seed)
    raise ValueError(f"unknown mode {mode!r}")


# -- refinement and cut distance ---------------------------------------------------

def _equal_refinement_count(w: StepGraphon, u: StepGraphon) -> int:
    dens = [b.denominator for b in w.boundaries()] + \
           [b.denominator for b in u.boundaries()]
    return lcm(*dens)


def _refine_equal(w: StepGraphon, cells: int) -> StepGraphon:
    reps = []
    for i, m in enumerate(w.measures):
        cnt = m * cells
        if cnt.denominator != 1:
            raise RefinementError(
                f"block of measure {m} does not split into cells of 1/{cells}")
        reps.extend([i] * int(cnt))
    vals = tuple(tuple(w.values[a][b] for b in reps) for a in reps)
    return _trusted_graphon((Fraction(1, cells),) * cells, vals)


def common_refinement(w: StepGraphon, u: StepGraphon,
                      max_cells: int | None = None):
    """Refine both graphons to the same equal-measure partition."""
    cells = _equal_refinement_count(w, u)
    if max_cells is not None and cells > max_cells:
        raise RefinementError(
            f"common equal-measure partition needs {cells} blocks, "
            f"limit is {max_cells}")
    return _refine_equal(w, cells), _refine_equal(u, cells)


def _difference_matrix(w: StepGraphon, u: StepGraphon, perm=None):
    k = w.k
    mu = w.measures
    if perm is None:
        perm = range(k)
    return [[mu[i] * mu[j] * (w.values[perm[i]][perm[j]] - u.values[i][j])
             for j in range(k)] for i in range(k)]


def _distance_eval(mat, seed: int):
    """Exact norm if the support decomposes small enough, else heuristic."""
    comps = _support_components(mat)
    if all(len(c) <= _EXACT_COMPONENT_CAP for c in comps):
        return _cut_norm_exact_matrix(mat), True
    return _cut_norm_heuristic_matrix(mat, HEURISTIC_RESTARTS, seed), False


def cut_distance(w: StepGraphon, u: StepGraphon, mode: str = "exact", *,
                 seed: int = 0, restarts: int = 8):
    """Cut distance: minimum over block relabelings of the difference norm.

    Both graphons are refined to a common equal-measure partition first.
    If the identity alignment attains the permutation-invariant bound
    |mass(W) - mass(U)| the exact minimum is returned at once (in either
    mode).  Otherwise exact mode enumerates the distinct relabelings
    (limit 8 blocks) and heuristic mode descends by pairwise swaps from
    the identity plus seeded random restarts.
    """
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    wr, ur = common_refinement(w, u, max_cells=4096)
    k = wr.k
    rng = np.random.Generator(np.random.Philox(key=seed))
    cell_sq = wr.measures[0] * wr.measures[0]  # refinement cells are equal
    wf = np.array([[float(v) for v in row] for row in wr.values])
    uf = np.array([[float(v) for v in row] for row in ur.values])

    def certified(perm) -> Fraction:
        # float search for a good rectangle, exact evaluation of that
        # rectangle: a true lower bound on the norm, reported as the
        # distance value for this alignment
        mfd = (wf[np.ix_(np.asarray(perm), np.asarray(perm))] - uf) * float(cell_sq)
        _, s, t = _heuristic_pair(mfd, rng, 6)
        total = Fraction(0)
        for i in np.flatnonzero(s):
            wrow = wr.values[perm[int(i)]]
            urow = ur.values[int(i)]
            for j in np.flatnonzero(t):
                total += wrow[perm[int(j)]] - urow[int(j)]
        return abs(total) * cell_sq

    small = k <= 64
    if small:
        id_mat = _difference_matrix(wr, ur)
        id_val, id_exact = _distance_eval(id_mat, seed)
        mass_gap = abs(sum((v for row in id_mat for v in row), Fraction(0)))
        # |mass(W)-mass(U)| lower-bounds the norm of every alignment, so
        # an exact identity value attaining it is the exact distance
        if id_exact and id_val == mass_gap:
            return id_val
    else:
        id_val = certified(list(range(k)))
        id_exact = False

    # a constant graphon is invariant under every relabeling
    if wr.is_constant() or ur.is_constant():
        return id_val

    if mode == "exact":
        if k > EXACT_DISTANCE_BLOCK_LIMIT:
            raise SizeError(
                f"exact cut distance limited to {EXACT_DISTANCE_BLOCK_LIMIT} "
                f"equal blocks after refinement (got {k}); use heuristic mode")
        best = id_val
        seen = {tuple(map(tuple, id_mat))}
        for perm in itertools.permutations(range(k)):
            mat = _difference_matrix(wr, ur, perm)
            key = tuple(map(tuple, mat))
            if key in seen:
                continue
            seen.add(key)
            val = _cut_norm_exact_matrix(mat)
            if val < best:
                best = val
                if best == mass_gap:
                    break
        return best

    # heuristic: search permutations on a float score, then evaluate the
    # winner once with exact arithmetic (or a certified lower bound)
    def score(perm) -> float:
        idx = np.asarray(perm)
        val, _, _ = _heuristic_pair((wf[np.ix_(idx, idx)] - uf) * float(cell_sq),
                                    rng, 4)
        return val

    best_perm = list(range(k))
    best_score = score(best_perm)
    for _ in range(restarts):
        perm = list(rng.permutation(k))
        val = score(perm)
        if val < best_score:
            best_score = val
            best_perm = perm
    improved = k <= 24  # pairwise-swap descent only at workable sizes
    rounds = 0
    while improved and rounds < 3:
        improved = False
        rounds += 1
        for a in range(k):
            for b in range(a + 1, k):
                perm = list(best_perm)
                perm[a], perm[b] = perm[b], perm[a]
                val = score(perm)
                if val < best_score - 1e-12:
                    best_score = val
                    best_perm = perm
                    improved = True
    if small:
        final, _ = _distance_eval(_difference_matrix(wr, ur, best_perm), seed)
    else:
        final = certified(best_perm)
    if best_perm != list(range(k)) and id_val < final:
        return id_val
    return final


# -- homomorphism densities ----------------------------------------------------------

def _weighted_map_sum(nv: int, edge_mats, k: int, mu):
    """sum over maps [nv] -> [k] of prod mu_phi(v) prod mat_e[phi(a)][phi(b)].

    ``edge_mats`` is a list of (a, b, matrix) with a < b.
    """
    edges_at: list[list[tuple[int, object]]] = [[] for _ in range(nv)]
    for (a, b, mat) in edge_mats:
        edges_at[max(a, b)].append((min(a, b), mat))
    total = Fraction(0)
    assign = [0] * nv

    def rec(depth: int, acc: Fraction):
        nonlocal total
        if depth == nv:
            total += acc
            return
        for c in range(k):
            term = acc * mu[c]
            if not term:
                continue
            assign[depth] = c
            ok = True
            for (a, mat) in edges_at[depth]:
                term = term * mat[assign[a]][c]
                if not term:
                    ok = False
                    break
            if ok:
                rec(depth + 1, term)

    rec(0, Fraction(1))
    return total


def hom_density(h: SimpleGraph, w: StepGraphon) -> Fraction:
    """Exact homomorphism density t(H, W)."""
    mats = [(a, b, w.values) for (a, b) in h.edges]
    return _weighted_map_sum(h.n, mats, w.k, w.measures)


def hom_density_graph(h: SimpleGraph, g: SimpleGraph) -> Fraction:
    """t(H, G) = hom(H, G) / n^{|V(H)|}, counted exactly."""
    if g.n == 0:
        raise ValueError("density into the empty graph is undefined")
    adj = [[0] * g.n for _ in range(g.n)]
    for (u, v) in g.edges:
        adj[u][v] = 1
        adj[v][u] = 1
    edges_at: list[list[int]] = [[] for _ in range(h.n)]
    for (a, b) in h.edges:
        edges_at[max(a, b)].append(min(a, b))
    count = 0
    assign = [0] * h.n

    def rec(depth: int):
        nonlocal count
        if depth == h.n:
            count += 1
            return
        for c in range(g.n):
            assign[depth] = c
            if all(adj[assign[a]][c] for a in edges_at[depth]):
                rec(depth + 1)

    rec(0)
    return Fraction(count, g.n ** h.n)


def gateaux_density_derivative(h: SimpleGraph, w: StepGraphon,
                               d: StepGraphon) -> Fraction:
    """Directional derivative of t(H, .) at W in direction D.

    Exactly the edge-sum formula: for each edge of H replace W by D on
    that edge and keep W on the others.  D must live on W's partition;
    both are refined to their common partition first.
    """
    if d.measures != w.measures:
        cells = _equal_refinement_count(w, d)
        if cells > 4096:
            raise RefinementError("partitions too fine to align exactly")
        w = _refine_equal(w, cells)
        d = _refine_equal(d, cells)
    total = Fraction(0)
    edges = list(h.edges)
    for idx in range(len(edges)):
        mats = [(a, b, d.values if i == idx else w.values)
                for i, (a, b) in enumerate(edges)]
        total += _weighted_map_sum(h.n, mats, w.k, w.measures)
    return total


def perturb(w: StepGraphon, d: StepGraphon, eps) -> StepGraphon:
    """W + eps*D on the common partition (values must stay in [0,1])."""
    eps = _as_coeff(eps)
    if d.measures != w.measures:
        cells = _equal_refinement_count(w, d)
        w = _refine_equal(w, cells)
        d = _refine_equal(d, cells)
    vals = [[w.values[i][j] + eps * d.values[i][j] for j in range(w.k)]
            for i in range(w.k)]
    return StepGraphon(w.measures, vals)


# -- enumeration of small connected graphs -------------------------------------------

_CONNECTED_CACHE: dict[int, list[SimpleGraph]] = {}


def connected_graphs_up_to(max_edges: int) -> list[SimpleGraph]:
    """All connected simple graphs with at most ``max_edges`` edges (and
    no isolated vertices), up to isomorphism; K1 included."""
    if max_edges < 0:
        raise ValueError("edge bound must be nonnegative")
    if max_edges > 5:
        raise SizeError("fingerprint levels supported up to 5 edges")
    if max_edges in _CONNECTED_CACHE:
        return _CONNECTED_CACHE[max_edges]
    out: list[SimpleGraph] = [SimpleGraph(1, [])]
    seen: set[str] = set()
    for v in range(2, max_edges + 2):
        all_pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
        for e in range(v - 1, max_edges + 1):
            for subset in itertools.combinations(all_pairs, e):
                g = SimpleGraph(v, subset)
                touched = {x for edge in subset for x in edge}
                if len(touched) < v:
                    continue
                if not _sg_connected(g):
                    continue
                code = g.canonical_code()
                if code not in seen:
                    seen.add(code)
                    out.append(g)
    out.sort(key=lambda g: (g.m, g.n, g.canonical_code()))
    _CONNECTED_CACHE[max_edges] = out
    return out


def _sg_connected(g: SimpleGraph) -> bool:
    if g.n <= 1:
        return True
    adj = [[] for _ in range(g.n)]
    for (u, v) in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


@dataclass(frozen=True)
class DensityFingerprint:
    """Homomorphism densities against all connected graphs with at most
    ``level`` edges, keyed by canonical graph code."""

    level: int
    densities: tuple[tuple[str, Fraction], ...]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.densities)

    def indistinguishable_from(self, other: "DensityFingerprint") -> bool:
        """Same densities at the common level."""
        level = min(self.level, other.level)
        a = {k: v for k, v in self.densities if _code_edges(k) <= level}
        b = {k: v for k, v in other.densities if _code_edges(k) <= level}
        return a == b


def _code_edges(code: str) -> int:
    _, _, rest = code.partition(":")
    return 0 if not rest else rest.count(",") + 1


def density_fingerprint(w: StepGraphon, level: int = 4) -> DensityFingerprint:
    """Fingerprint of W by densities of connected graphs up to ``level`` edges."""
    rows = []
    for h in connected_graphs_up_to(level):
        rows.append((h.canonical_code(), hom_density(h, w)))
    return DensityFingerprint(level=level, densities=tuple(rows))


# -- sampling -------------------------------------------------------------------------

def sample_random_graph(n: int, w: StepGraphon, seed: int = 0) -> SimpleGraph:
    """W-random graph on n vertices.

    Vertex types and edge coins come from one counter-based stream keyed
    by the seed (vertex draws first, then edges in lexicographic order),
    so identical seeds give identical graphs independent of scheduling.
    Coins are compared against 64-bit dyadic approximations of the
    rational thresholds; the bias is 2^-64 per comparison.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = np.random.Generator(np.random.Philox(key=seed))
    scale = 1 << 64
    cuts = []
    acc = Fraction(0)
    for m in w.measures:
        acc += m
        cuts.append(int(acc * scale))
    vert_draws = rng.integers(0, scale, size=n, dtype=np.uint64,
                              endpoint=False)
    types = []
    for x in vert_draws:
        x = int(x)
        b = next(i for i, c in enumerate(cuts) if x < c or i == w.k - 1)
        types.append(b)
    thresholds = [[int(v * scale) for v in row] for row in w.values]
    m_edges = n * (n - 1) // 2
    edge_draws = rng.integers(0, scale, size=m_edges, dtype=np.uint64,
                              endpoint=False)
    edges = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if int(edge_draws[idx]) < thresholds[types[i]][types[j]]:
                edges.append((i, j))
            idx += 1
    return SimpleGraph(n, edges)


# -- solution-series diagnostics --------------------------------------------------------

def convergence_trace(sol, m: int, mode: str = "heuristic", *, seed: int = 0,
                      restarts: int = 2) -> list:
    """Successive cut distances of the Feynman graphons of the partial
    structural sums Y_1..Y_m at the solution's coupling."""
    from .dse import structural_sum
    if m < 1 or m > sol.order:
        raise ValueError(f"trace needs 1 <= m <= {sol.order}")
    graphons = [feynman_graphon(structural_sum(sol, i), sol.coupling)
                for i in range(1, m + 1)]
    out = []
    for i in range(m - 1):
        out.append(cut_distance(graphons[i], graphons[i + 1], mode,
                                seed=seed, restarts=restarts))
    return out
