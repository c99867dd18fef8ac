"""Demand-private scheme built from the NK-virtual-user building block.

User k holds a key s_k uniform on [N] and receives the cache of virtual
user (k-1)N + s_k. On demands d the server broadcasts the shifts
c_k = (s_k - d_k) mod N in the clear, followed by the building-block payload
for the lifted demand whose k-th block is (1..N) cyclically shifted right by
c_k. The lifted demand always requests all N files, so the payload length
never depends on (s, d).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import (
    BroadcastMessage,
    CacheContent,
    FileLibrary,
    SchemeParams,
    check_vector,
    sample_library,
)
from .yma import yma_decode, yma_deliver, yma_place


def sample_keys(params: SchemeParams, seed: int) -> tuple[int, ...]:
    rng = random.Random(seed)
    return tuple(rng.randrange(params.n_files) + 1 for _ in range(params.n_users))


def compute_shifts(keys: Sequence[int], demands: Sequence[int], n_files: int) -> tuple[int, ...]:
    if len(keys) != len(demands):
        raise ValueError(f"{len(keys)} keys but {len(demands)} demands")
    check_vector(keys, len(keys), n_files, "key vector")
    check_vector(demands, len(demands), n_files, "demand vector")
    return tuple((s - d) % n_files for s, d in zip(keys, demands))


def lift_demands(shifts: Sequence[int], n_files: int) -> tuple[int, ...]:
    """Virtual demand: entry (k-1)N + j is ((j - 1 - c_k) mod N) + 1."""
    for c in shifts:
        if not 0 <= c < n_files:
            raise ValueError(f"shift {c} outside [0, {n_files - 1}]")
    return tuple((j - 1 - c) % n_files + 1 for c in shifts for j in range(1, n_files + 1))


def virtual_index(k: int, key: int, n_files: int) -> int:
    return (k - 1) * n_files + key


def private_place(params: SchemeParams, library: FileLibrary, keys: Sequence[int]) -> list[CacheContent]:
    keys = check_vector(keys, params.n_users, params.n_files, "key vector")
    virtual = yma_place(library)
    caches = []
    for k, s in enumerate(keys, start=1):
        v = virtual[virtual_index(k, s, params.n_files) - 1]
        caches.append(CacheContent(k, s, v.store, params.subfile_bits))
    return caches


def deliver_for_shifts(library: FileLibrary, shifts: Sequence[int]) -> BroadcastMessage:
    delivered = yma_deliver(library, lift_demands(shifts, library.n_files))
    return BroadcastMessage(tuple(shifts),
                            tuple(block for _, block in delivered),
                            tuple(S for S, _ in delivered))


def private_deliver(library: FileLibrary, demands: Sequence[int], keys: Sequence[int]) -> BroadcastMessage:
    return deliver_for_shifts(library, compute_shifts(keys, demands, library.n_files))


def private_decode(params: SchemeParams, k: int, cache: CacheContent, broadcast: BroadcastMessage) -> tuple[int, ...]:
    n = params.n_files
    shifts = broadcast.header[:params.n_users]
    d_np = lift_demands(shifts, n)
    delivered = list(zip(broadcast.labels, broadcast.payload))
    return yma_decode(virtual_index(k, cache.key, n), cache, delivered, d_np, n, params.cache_index)


def trivial_deliver(library: FileLibrary, m_files: int) -> BroadcastMessage:
    """Baseline: every user caches files 1..m_files, the rest go out uncoded."""
    if not 0 <= m_files <= library.n_files:
        raise ValueError(f"m_files={m_files} outside [0, {library.n_files}]")
    rest = range(m_files + 1, library.n_files + 1)
    payload = tuple(block for i in rest for block in library.file(i))
    labels = tuple((i, r) for i in rest for r in range(library.n_subfiles))
    return BroadcastMessage((), payload, labels)


def trivial_rate(library: FileLibrary, broadcast: BroadcastMessage) -> Fraction:
    return Fraction(len(broadcast.payload), library.n_subfiles)


class PrivateScheme:
    """The construction bundled behind the place/deliver/decode interface."""

    name = "general construction"

    def __init__(self, params: SchemeParams):
        self.params = params

    @property
    def key_space(self) -> int:
        return self.params.n_files

    def place(self, library, keys):
        return private_place(self.params, library, keys)

    def deliver(self, library, demands, keys):
        return private_deliver(library, demands, keys)

    def decode(self, k, cache, broadcast):
        return private_decode(self.params, k, cache, broadcast)


@dataclass(frozen=True)
class PrivateEpisode:
    params: SchemeParams
    seed: int
    library: FileLibrary
    keys: tuple[int, ...]
    demands: tuple[int, ...]
    shifts: tuple[int, ...]
    broadcast: BroadcastMessage
    decoded: tuple[tuple[int, ...], ...]
    success: tuple[bool, ...]
    realized_rate: Fraction

    def record(self) -> str:
        p = self.params
        flags = "".join("1" if ok else "0" for ok in self.success)
        return (f"N={p.n_files} K={p.n_users} t={p.cache_index} b={p.subfile_bits} "
                f"seed={self.seed} c={','.join(map(str, self.shifts))} "
                f"rate={self.realized_rate} ok={flags}")


def run_episode(params: SchemeParams, seed: int) -> PrivateEpisode:
    """Sample library, keys and uniform demands from one seed, then run the protocol."""
    rng = random.Random(seed)
    library = sample_library(params, rng.getrandbits(64))
    keys = sample_keys(params, rng.getrandbits(64))
    demands = tuple(rng.randrange(params.n_files) + 1 for _ in range(params.n_users))
    caches = private_place(params, library, keys)
    broadcast = private_deliver(library, demands, keys)
    decoded = tuple(private_decode(params, k, caches[k - 1], broadcast)
                    for k in range(1, params.n_users + 1))
    success = tuple(out == library.file(d) for out, d in zip(decoded, demands))
    rate = Fraction(broadcast.payload_bits(params.subfile_bits), params.file_bits)
    return PrivateEpisode(params, seed, library, keys, demands, broadcast.header,
                          broadcast, decoded, success, rate)
