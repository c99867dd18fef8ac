"""Binomial coefficients and colexicographic ranking of fixed-size subsets.

Subsets are sorted tuples of 1-based integers. The colex rank of
``{a_1 < ... < a_t}`` is ``sum_i C(a_i - 1, i)``, so the order does not
depend on the universe size.

Exact rationals are plain :class:`fractions.Fraction` values throughout the
package (always reduced, positive denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

BigRational = Fraction


def binomial(n: int, k: int) -> int:
    """C(n, k), with C(n, k) = 0 whenever k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


@dataclass(frozen=True)
class SubsetIndex:
    n: int
    t: int
    rank: int

    def __post_init__(self):
        if not 0 <= self.t <= self.n:
            raise ValueError(f"cardinality {self.t} outside [0, {self.n}]")
        if not 0 <= self.rank < binomial(self.n, self.t):
            raise ValueError(f"rank {self.rank} outside [0, C({self.n},{self.t}))")

    def subset(self) -> tuple[int, ...]:
        return unrank_subset(self.n, self.t, self.rank)


def colex_rank(subset: Sequence[int]) -> int:
    """Colex rank of a sorted subset; no validation (hot path)."""
    return sum(comb(a - 1, i) for i, a in enumerate(subset, start=1))


def rank_subset(n: int, subset: Sequence[int]) -> SubsetIndex:
    subset = tuple(subset)
    for i, a in enumerate(subset):
        if not 1 <= a <= n:
            raise ValueError(f"element {a} outside [1, {n}]")
        if i and subset[i - 1] >= a:
            raise ValueError(f"subset {subset} is not strictly increasing")
    return SubsetIndex(n, len(subset), colex_rank(subset))


def unrank_subset(n: int, t: int, rank: int) -> tuple[int, ...]:
    if not 0 <= t <= n:
        raise ValueError(f"cardinality {t} outside [0, {n}]")
    if not 0 <= rank < binomial(n, t):
        raise ValueError(f"rank {rank} outside [0, C({n},{t}))")
    out = []
    a = n
    for i in range(t, 0, -1):
        # largest a with C(a - 1, i) <= rank
        while comb(a - 1, i) > rank:
            a -= 1
        out.append(a)
        rank -= comb(a - 1, i)
        a -= 1
    return tuple(reversed(out))


@lru_cache(maxsize=256)
def colex_subsets(n: int, t: int) -> tuple[tuple[int, ...], ...]:
    """All t-subsets of [n] in colex order (index == rank)."""
    if not 0 <= t <= n:
        return ()
    return tuple(sorted(combinations(range(1, n + 1), t), key=lambda s: s[::-1]))


@lru_cache(maxsize=256)
def colex_rank_table(n: int, t: int) -> dict[tuple[int, ...], int]:
    return {s: r for r, s in enumerate(colex_subsets(n, t))}
