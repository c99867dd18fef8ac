import random

import pytest

from dpcache import gf2


def test_solves_simple_system():
    eqs = [("a", "b"), ("b", "c"), ("c",)]
    recipes = gf2.solve(eqs, [], ["a", "b", "c"])
    a, b, c = 1, 0, 1
    payload = [a ^ b, b ^ c, c]
    assert gf2.apply(recipes, payload, {}) == (a, b, c)


def test_known_symbols_fold_into_rhs():
    recipes = gf2.solve([("x", "k")], ["k"], ["x", "k"])
    assert gf2.apply(recipes, [0b110], {"k": 0b011}) == (0b101, 0b011)


def test_undetermined():
    with pytest.raises(gf2.Undetermined):
        gf2.solve([("a", "b")], [], ["a"])
    with pytest.raises(gf2.Undetermined):
        gf2.solve([], [], ["z"])


def test_random_full_rank_systems():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randrange(1, 8)
        values = {i: rng.getrandbits(8) for i in range(n)}
        eqs = [tuple(i for i in range(n) if rng.random() < 0.5) for _ in range(n + 3)]
        # rank over GF(2) by brute force on bitmasks
        basis = []
        for eq in eqs:
            v = sum(1 << i for i in eq)
            for bvec in basis:
                v = min(v, v ^ bvec)
            if v:
                basis.append(v)
        payload = []
        for eq in eqs:
            x = 0
            for i in eq:
                x ^= values[i]
            payload.append(x)
        if len(basis) == n:
            recipes = gf2.solve(eqs, [], list(range(n)))
            assert gf2.apply(recipes, payload, {}) == tuple(values[i] for i in range(n))
        else:
            with pytest.raises(gf2.Undetermined):
                gf2.solve(eqs, [], list(range(n)))
