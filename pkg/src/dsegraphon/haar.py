"""Compact abelian model of solution space: ranked universe, invariant
metric, symmetric-difference group, and Haar sampling.

A universe is a countable set of items with a rank bijection, truncated
at depth m.  Points are subsets, encoded as bitmasks over ranks 1..m.
The metric weights rank r by base^(-r) for a rational base >= 1; at
base 2 the norm map sends the Haar (fair-coin product) measure to
Lebesgue measure on [0,1], which is what the ball-measure Monte Carlo
checks: mu(ball of radius r around the identity) = r up to a 2^-m
truncation term and binomial noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

import numpy as np
from scipy import stats

from .trees import _as_coeff


@dataclass(frozen=True)
class VertexUniverse:
    """Ranked universe truncated at ``depth``; ranks run 1..depth.

    ``alpha`` optionally names the items: pairs (item id, rank), injective
    in both coordinates.  Unnamed ranks are their own ids.
    """

    depth: int
    alpha: tuple = ()

    def __post_init__(self):
        if not isinstance(self.depth, int) or self.depth < 1:
            raise ValueError("depth must be a positive integer")
        pairs = tuple((i, int(r)) for (i, r) in self.alpha)
        ids = [i for (i, _) in pairs]
        ranks = [r for (_, r) in pairs]
        if len(set(ids)) != len(ids) or len(set(ranks)) != len(ranks):
            raise ValueError("rank assignment must be a bijection")
        if any(not (1 <= r <= self.depth) for r in ranks):
            raise ValueError(f"ranks must lie in 1..{self.depth}")
        object.__setattr__(self, "alpha", pairs)

    def rank_of(self, item) -> int:
        for (i, r) in self.alpha:
            if i == item:
                return r
        if isinstance(item, int) and 1 <= item <= self.depth:
            return item
        raise KeyError(f"unknown universe item {item!r}")

    def point(self, items=()) -> "SolutionPoint":
        mask = 0
        for it in items:
            mask |= 1 << (self.rank_of(it) - 1)
        return SolutionPoint(self, mask)

    def point_from_ranks(self, ranks=()) -> "SolutionPoint":
        mask = 0
        for r in ranks:
            if not (1 <= r <= self.depth):
                raise ValueError(f"rank {r} outside 1..{self.depth}")
            mask |= 1 << (r - 1)
        return SolutionPoint(self, mask)

    def identity(self) -> "SolutionPoint":
        return SolutionPoint(self, 0)

    def full(self) -> "SolutionPoint":
        return SolutionPoint(self, (1 << self.depth) - 1)


@dataclass(frozen=True)
class SolutionPoint:
    """Subset of a ranked universe; a group element under symmetric
    difference with the empty set as identity."""

    universe: VertexUniverse
    mask: int

    def __post_init__(self):
        if not (0 <= self.mask < (1 << self.universe.depth)):
            raise ValueError("bitset exceeds universe depth")

    def ranks(self) -> tuple[int, ...]:
        return tuple(r for r in range(1, self.universe.depth + 1)
                     if self.mask >> (r - 1) & 1)

    def __contains__(self, rank: int) -> bool:
        return 1 <= rank <= self.universe.depth and bool(self.mask >> (rank - 1) & 1)


def _require_shared(x: SolutionPoint, y: SolutionPoint):
    if x.universe != y.universe:
        raise ValueError("points live in different universes")


def _base(g, eps) -> Fraction:
    g = _as_coeff(g)
    eps = _as_coeff(eps)
    if g < 1:
        raise ValueError("coupling weight g must be >= 1")
    if eps <= 0:
        raise ValueError("regulator must be positive")
    return g + eps


def group_op(x: SolutionPoint, y: SolutionPoint) -> SolutionPoint:
    """Symmetric difference; every element is its own inverse."""
    _require_shared(x, y)
    return SolutionPoint(x.universe, x.mask ^ y.mask)


def distance(x: SolutionPoint, y: SolutionPoint, g=1, eps=1) -> Fraction:
    """d(X, Y) = sum over the symmetric difference of (g+eps)^-rank."""
    _require_shared(x, y)
    b = _base(g, eps)
    diff = x.mask ^ y.mask
    total = Fraction(0)
    r = 1
    while diff:
        if diff & 1:
            total += b ** (-r)
        diff >>= 1
        r += 1
    return total


def norm(x: SolutionPoint, g=1, eps=1) -> Fraction:
    """Distance from the identity; the binary-expansion map when g+eps=2."""
    return distance(x, x.universe.identity(), g, eps)


def sample_haar(depth: int, seed: int = 0) -> SolutionPoint:
    """One Haar sample: an independent fair coin per rank."""
    mask = int(_sample_norm_ints(depth, 1, seed)[0])
    # the integer encodes bits at weights 2^(depth-r); reverse to a mask
    bits = [(mask >> (depth - r)) & 1 for r in range(1, depth + 1)]
    out = 0
    for r, b in enumerate(bits, start=1):
        if b:
            out |= 1 << (r - 1)
    return SolutionPoint(VertexUniverse(depth), out)


def _sample_norm_ints(depth: int, n: int, seed: int) -> np.ndarray:
    """n independent samples, each reduced to the integer
    round(2^depth * norm): the bit at rank r contributes 2^(depth-r).

    One counter-based stream per master seed; the whole matrix of coin
    flips is drawn in a single deterministic block.
    """
    if depth < 1 or depth > 62:
        raise ValueError("depth must lie in 1..62")
    rng = np.random.Generator(np.random.Philox(key=seed))
    bits = rng.integers(0, 2, size=(n, depth), dtype=np.uint64)
    weights = np.array([1 << (depth - r) for r in range(1, depth + 1)],
                       dtype=np.uint64)
    return bits @ weights


@dataclass(frozen=True)
class BallEstimate:
    """Monte-Carlo estimate of the Haar measure of a closed ball around
    the identity at base 2."""

    r: Fraction
    hits: int
    samples: int
    depth: int
    seed: int

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.hits, self.samples)

    @property
    def stderr(self) -> float:
        p = self.hits / self.samples
        return sqrt(max(p * (1 - p), 1e-12) / self.samples)

    def tolerance(self) -> float:
        """3 sigma plus the 2^-depth truncation bias."""
        return 3 * self.stderr + 2.0 ** (-self.depth)

    def within_tolerance(self) -> bool:
        return abs(float(self.estimate) - float(self.r)) <= self.tolerance()


def ball_measure_mc(r, depth: int = 24, samples: int = 100_000,
                    seed: int = 0) -> BallEstimate:
    """Fraction of Haar samples with norm <= r at base 2.

    The comparison norm <= r is exact: norms are integers over 2^depth
    and the threshold is floor(r * 2^depth).
    """
    r = _as_coeff(r)
    if not (0 <= r <= 1):
        raise ValueError("radius must lie in [0, 1]")
    if samples < 1:
        raise ValueError("need at least one sample")
    ints = _sample_norm_ints(depth, samples, seed)
    threshold = (r.numerator << depth) // r.denominator
    hits = int(np.count_nonzero(ints <= np.uint64(threshold)))
    return BallEstimate(r=r, hits=hits, samples=samples, depth=depth, seed=seed)


def norm_uniformity_statistic(depth: int = 24, samples: int = 100_000,
                              seed: int = 0) -> float:
    """Kolmogorov-Smirnov statistic of the empirical norm distribution
    against uniform [0,1]; small iff the norm map pushes Haar to
    Lebesgue, as claimed."""
    ints = _sample_norm_ints(depth, samples, seed)
    values = ints.astype(np.float64) / float(1 << depth)
    return float(stats.kstest(values, "uniform").statistic)


def ks_critical_value(samples: int, alpha: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value."""
    coeff = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}.get(alpha)
    if coeff is None:
        raise ValueError("alpha must be one of 0.10, 0.05, 0.01")
    return coeff / sqrt(samples)
