"""Hand-built private scheme for N = K = 2, F = 6 (bits A1..A6, B1..B6).

Cache choices and the 16-row transmission table are stored literally. The
transmission index T in {1, 2, 3, 4} is the whole header; each T maps to a
single shift vector c = ((s1 - d1) mod 2, (s2 - d2) mod 2), which is how a
user infers its own demand when decoding.
"""

from __future__ import annotations

from . import gf2
from .model import BroadcastMessage, CacheContent, FileLibrary, SchemeParams, check_vector
from .yma import DecodeError

FIXTURE_PARAMS = SchemeParams(2, 2, 2, 1)

# cache of user k holding key s
CACHE_TABLE = {
    (1, 1): "A1 A2 A3 B1 B2 B3",
    (1, 2): "A1 A4 A5 B1 B4 B5",
    (2, 1): "A2 A4 A6 B2 B4 B6",
    (2, 2): "A3 A5 A6 B3 B5 B6",
}

TRANSMISSIONS = {
    1: ("B2+A1+A4", "B4+B6+A5", "B2+A6+A3", "B1+A5+B3"),
    2: ("B1+A4+B2", "A4+B6+B5", "A2+A6+B3", "A1+A5+B3"),
    3: ("B4+A2+A1", "A6+A5+B4", "B6+A3+B2", "B5+A3+B1"),
    4: ("B4+A2+B1", "A6+B5+A4", "B6+B3+A2", "B5+A3+A1"),
}

# (s1, s2, d1, d2) -> transmission index, row for row
SELECTION = {
    (1, 1, 1, 1): 1, (1, 2, 1, 2): 1, (2, 1, 2, 1): 1, (2, 2, 2, 2): 1,
    (1, 1, 1, 2): 2, (1, 2, 1, 1): 2, (2, 1, 2, 2): 2, (2, 2, 2, 1): 2,
    (1, 1, 2, 1): 3, (1, 2, 2, 2): 3, (2, 1, 1, 1): 3, (2, 2, 1, 2): 3,
    (1, 1, 2, 2): 4, (1, 2, 2, 1): 4, (2, 1, 1, 2): 4, (2, 2, 1, 1): 4,
}

SHIFTS_OF = {1: (0, 0), 2: (0, 1), 3: (1, 0), 4: (1, 1)}


def _symbol(name: str) -> tuple[int, int]:
    """'B4' -> (file 2, bit index 3)."""
    return ("AB".index(name[0]) + 1, int(name[1:]) - 1)


CACHE_SYMBOLS = {key: tuple(sorted(_symbol(x) for x in row.split()))
                 for key, row in CACHE_TABLE.items()}
TRANSMISSION_SYMBOLS = {T: tuple(tuple(_symbol(x) for x in eq.split("+")) for eq in eqs)
                        for T, eqs in TRANSMISSIONS.items()}


class FixtureScheme:
    name = "hand-built N=K=2 fixture"
    params = FIXTURE_PARAMS
    key_space = 2

    def place(self, library: FileLibrary, keys):
        keys = check_vector(keys, 2, 2, "key vector")
        return [CacheContent(k, s, tuple((sym, library.files[sym[0] - 1][sym[1]])
                                         for sym in CACHE_SYMBOLS[k, s]))
                for k, s in enumerate(keys, start=1)]

    def deliver(self, library: FileLibrary, demands, keys):
        keys = check_vector(keys, 2, 2, "key vector")
        demands = check_vector(demands, 2, 2, "demand vector")
        T = SELECTION[keys + demands]
        eqs = TRANSMISSION_SYMBOLS[T]
        payload = []
        for eq in eqs:
            bit = 0
            for i, j in eq:
                bit ^= library.files[i - 1][j]
            payload.append(bit)
        return BroadcastMessage((T,), tuple(payload), eqs)

    def decode(self, k: int, cache: CacheContent, broadcast: BroadcastMessage):
        c = SHIFTS_OF[broadcast.header[0]][k - 1]
        demand = (cache.key - c - 1) % 2 + 1
        wanted = [(demand, j) for j in range(6)]
        try:
            recipes = gf2.solve(broadcast.labels, cache.keys(), wanted)
        except gf2.Undetermined as exc:
            raise DecodeError(f"user {k}: {exc}") from None
        return gf2.apply(recipes, broadcast.payload, cache.as_dict())
