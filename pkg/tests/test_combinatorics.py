from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from dpcache.combinatorics import (
    SubsetIndex,
    binomial,
    colex_rank,
    colex_subsets,
    rank_subset,
    unrank_subset,
)


def pascal_rows(n_max):
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[i - 1] + prev[i] for i in range(1, n)] + [1])
    return rows


def colex_oracle(n, t):
    # colex: compare largest elements first
    return sorted(combinations(range(1, n + 1), t), key=lambda s: tuple(reversed(s)))


@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (2, 3, 0), (5, -1, 0), (0, 0, 1)])
def test_binomial_small(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_against_pascal_triangle():
    rows = pascal_rows(64)
    assert binomial(20, 10) == rows[20][10] == 184756
    for n in range(65):
        for k in range(n + 1):
            assert binomial(n, k) == rows[n][k]
    assert binomial(200, 100) > 2 ** 64  # no overflow


def test_pascal_identity():
    for n in range(1, 65):
        for k in range(n + 1):
            assert binomial(n, k) == binomial(n - 1, k) + binomial(n - 1, k - 1)


@pytest.mark.parametrize("subset,rank", [((1, 2), 0), ((3, 4), 5), ((1, 4), 3)])
def test_rank_examples(subset, rank):
    assert colex_oracle(4, 2).index(subset) == rank
    assert rank_subset(4, subset) == SubsetIndex(4, 2, rank)


def test_unrank_examples():
    assert unrank_subset(4, 2, 0) == (1, 2)
    assert unrank_subset(4, 4, 0) == (1, 2, 3, 4)
    assert unrank_subset(4, 0, 0) == ()


def test_colex_listing_matches_oracle():
    for n in range(7):
        for t in range(n + 1):
            assert list(colex_subsets(n, t)) == colex_oracle(n, t)


def test_round_trip_exhaustive():
    for n in range(1, 13):
        for t in range(n + 1):
            for r in range(binomial(n, t)):
                s = unrank_subset(n, t, r)
                assert rank_subset(n, s).rank == r
                assert colex_rank(s) == r


@pytest.mark.parametrize("subset", [(1, 1), (0, 2), (2, 5), (3, 2)])
def test_rank_rejects_bad_subsets(subset):
    with pytest.raises(ValueError):
        rank_subset(4, subset)


def test_unrank_rejects_out_of_range():
    with pytest.raises(ValueError):
        unrank_subset(4, 2, 6)
    with pytest.raises(ValueError):
        SubsetIndex(4, 2, -1)


nonzero = st.fractions().filter(lambda f: f != 0)


@given(nonzero)
def test_fraction_reciprocal(q):
    assert q * (1 / q) == 1


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_fraction_normal_form(a, b):
    q = Fraction(a, b)
    assert q.denominator > 0
    assert Fraction(q.numerator, q.denominator) == q
    assert Fraction(q.numerator, q.denominator).numerator == q.numerator
