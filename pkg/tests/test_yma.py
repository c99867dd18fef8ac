import random
from collections import defaultdict
from fractions import Fraction
from itertools import combinations, product

import pytest

from dpcache.combinatorics import binomial, colex_rank_table
from dpcache.model import FileLibrary, SchemeParams, enumerate_worlds, sample_library
from dpcache.yma import DecodeError, pick_leaders, yma_decode, yma_deliver, yma_place, yma_rate


def random_library(n_files, universe, t, b=1, seed=0):
    rng = random.Random(seed)
    n_sub = binomial(universe, t)
    return FileLibrary(n_files, universe, t, b,
                       tuple(tuple(rng.getrandbits(b) for _ in range(n_sub)) for _ in range(n_files)))


def subset_of(library, rank):
    from dpcache.combinatorics import unrank_subset
    return unrank_subset(library.universe, library.cardinality, rank)


def test_place_example():
    lib = random_library(2, 4, 2)
    caches = yma_place(lib)
    for i in (1, 2):
        held = sorted(subset_of(lib, r) for (f, r) in caches[0].keys() if f == i)
        assert held == [(1, 2), (1, 3), (1, 4)]
    assert all(len(c.store) == 2 * binomial(3, 1) for c in caches)


def test_place_extremes():
    assert all(c.store == () for c in yma_place(random_library(2, 4, 0)))
    full = yma_place(random_library(2, 4, 4))
    assert all(len(c.store) == 2 for c in full)


@pytest.mark.parametrize("d,leaders", [((1, 2, 2, 1), (1, 2)), ((3, 3, 3), (1,)), ((1, 2, 3), (1, 2, 3))])
def test_pick_leaders(d, leaders):
    assert pick_leaders(d) == leaders


@pytest.mark.parametrize("t,count", [(2, 4), (4, 0), (1, 5)])
def test_delivery_counts_example(t, count):
    lib = random_library(2, 4, t)
    assert len(yma_deliver(lib, (1, 2, 2, 1))) == count


def test_delivery_matches_direct_enumeration():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randrange(1, 4)
        kp = rng.randrange(1, 6)
        t = rng.randrange(0, kp + 1)
        d = tuple(rng.randrange(1, n + 1) for _ in range(kp))
        lib = random_library(n, kp, t, b=5, seed=rng.getrandbits(32))
        ranks = colex_rank_table(kp, t)
        leaders = set(pick_leaders(d))
        expected = {}
        for S in combinations(range(1, kp + 1), t + 1):
            if leaders & set(S):
                x = 0
                for u in S:
                    rest = tuple(v for v in S if v != u)
                    x ^= lib.files[d[u - 1] - 1][ranks[rest]]
                expected[S] = x
        got = yma_deliver(lib, d)
        assert dict(got) == expected
        assert len(got) == binomial(kp, t + 1) - binomial(kp - len(leaders), t + 1)
        # colex order of transmitted subsets
        assert [S for S, _ in got] == sorted(expected, key=lambda s: s[::-1])


def decode_all(lib, d):
    caches = yma_place(lib)
    delivered = yma_deliver(lib, d)
    return [yma_decode(u, caches[u - 1], delivered, d, lib.n_files, lib.cardinality)
            for u in range(1, len(d) + 1)]


def test_decode_every_demand_small():
    for t in range(5):
        for seed in range(3):
            lib = random_library(2, 4, t, b=4, seed=seed)
            for d in product((1, 2), repeat=4):
                outs = decode_all(lib, d)
                assert outs == [lib.file(x) for x in d]


def test_decode_three_files():
    for t in range(7):
        lib = random_library(3, 6, t, b=3, seed=t)
        rng = random.Random(t)
        for _ in range(10):
            d = tuple(rng.randrange(1, 4) for _ in range(6))
            assert decode_all(lib, d) == [lib.file(x) for x in d]


def test_full_cache_reads_directly():
    lib = random_library(2, 4, 4, b=7)
    caches = yma_place(lib)
    assert yma_deliver(lib, (1, 2, 2, 1)) == []
    assert yma_decode(3, caches[2], [], (1, 2, 2, 1), 2, 4) == lib.file(2)


def test_non_leader_matches_brute_force_oracle():
    # oracle: the file is decodable iff it is constant on every class of
    # libraries the user cannot tell apart (same cache bits, same payload)
    d = (1, 2, 2, 1)
    u = 3
    seen = defaultdict(set)
    for lib in enumerate_worlds(SchemeParams(2, 2, 2, 1)):
        caches = yma_place(lib)
        delivered = yma_deliver(lib, d)
        seen[caches[u - 1].store, tuple(x for _, x in delivered)].add(lib.file(d[u - 1]))
        assert yma_decode(u, caches[u - 1], delivered, d, 2, 2) == lib.file(d[u - 1])
    assert all(len(files) == 1 for files in seen.values())


def test_decoded_values_satisfy_equations():
    lib = random_library(2, 4, 2, b=6, seed=9)
    d = (1, 2, 2, 1)
    caches = yma_place(lib)
    delivered = yma_deliver(lib, d)
    ranks = colex_rank_table(4, 2)
    for u in range(1, 5):
        known = caches[u - 1].as_dict()
        out = yma_decode(u, caches[u - 1], delivered, d, 2, 2)
        known.update({(d[u - 1], r): v for r, v in enumerate(out)})
        for S, block in delivered:
            terms = [(d[v - 1], ranks[tuple(w for w in S if w != v)]) for v in S]
            if all(x in known for x in terms):
                acc = 0
                for x in terms:
                    acc ^= known[x]
                assert acc == block


def test_dropped_equation_is_undetermined():
    lib = random_library(2, 4, 2)
    d = (1, 2, 2, 1)
    caches = yma_place(lib)
    delivered = yma_deliver(lib, d)
    failures = 0
    for j in range(len(delivered)):
        partial = delivered[:j] + delivered[j + 1:]
        for u in range(1, 5):
            try:
                yma_decode(u, caches[u - 1], partial, d, 2, 2)
            except DecodeError:
                failures += 1
    assert failures > 0


@pytest.mark.parametrize("args,expected", [((2, 2, 1), Fraction(1, 2)), ((2, 4, 2), Fraction(2, 3)),
                                           ((3, 5, 5), 0), ((1, 1, 0), 1)])
def test_yma_rate(args, expected):
    assert yma_rate(*args) == expected


def test_rate_identity_with_payload():
    for n, kp in [(2, 4), (3, 6), (2, 3), (4, 3)]:
        for t in range(kp + 1):
            d = tuple((u % n) + 1 for u in range(kp))
            assert len(set(d)) == min(n, kp)
            lib = random_library(n, kp, t, b=2)
            bits = len(yma_deliver(lib, d)) * 2
            assert Fraction(bits, binomial(kp, t) * 2) == yma_rate(n, kp, t)
