"""Non-private building block: uncoded placement with leader-based delivery.

Instantiated with K' virtual users and cache index t. Subfile (i, T) of file
i is indexed by a t-subset T of [K']; virtual user u caches (i, T) iff u is
in T. For each (t+1)-subset S meeting the leader set, the server sends
``XOR_{u in S} W_{d(u), S minus u}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import gf2
from .combinatorics import binomial, colex_rank_table, colex_subsets
from .model import CacheContent, FileLibrary


class DecodeError(Exception):
    """A user could not recover its file (a scheme or transport bug)."""


def yma_place(library: FileLibrary) -> list[CacheContent]:
    """Caches of virtual users 1..K' (``library.universe`` of them)."""
    n, t = library.universe, library.cardinality
    subsets = colex_subsets(n, t)
    caches = []
    for u in range(1, n + 1):
        ranks = [r for r, T in enumerate(subsets) if u in T]
        store = tuple(((i, r), library.files[i - 1][r])
                      for i in range(1, library.n_files + 1) for r in ranks)
        caches.append(CacheContent(u, None, store, library.subfile_bits))
    return caches


def pick_leaders(d_np: Sequence[int]) -> tuple[int, ...]:
    """Lowest-index (1-based) demander of each distinct file."""
    seen = set()
    leaders = []
    for u, d in enumerate(d_np, start=1):
        if d not in seen:
            seen.add(d)
            leaders.append(u)
    return tuple(leaders)


@lru_cache(maxsize=4096)
def delivery_layout(universe: int, t: int, d_np: tuple[int, ...]) -> tuple:
    """For each transmitted (t+1)-subset S: (S, ((file, rank), ...) summed)."""
    leaders = set(pick_leaders(d_np))
    ranks = colex_rank_table(universe, t)
    layout = []
    for S in colex_subsets(universe, t + 1):
        if leaders.isdisjoint(S):
            continue
        terms = tuple((d_np[u - 1], ranks[tuple(v for v in S if v != u)]) for u in S)
        layout.append((S, terms))
    return tuple(layout)


def yma_deliver(library: FileLibrary, d_np: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    d_np = tuple(d_np)
    if len(d_np) != library.universe:
        raise ValueError(f"demand vector has {len(d_np)} entries, expected {library.universe}")
    if any(not 1 <= d <= library.n_files for d in d_np):
        raise ValueError(f"demand entries must lie in [1, {library.n_files}]")
    files = library.files
    out = []
    for S, terms in delivery_layout(library.universe, library.cardinality, d_np):
        block = 0
        for i, r in terms:
            block ^= files[i - 1][r]
        out.append((S, block))
    return out


@lru_cache(maxsize=4096)
def _decode_plan(n_files: int, universe: int, t: int, d_np: tuple[int, ...], u: int,
                 known: tuple, labels: tuple) -> tuple:
    ranks = colex_rank_table(universe, t)
    equations = [[(d_np[v - 1], ranks[tuple(w for w in S if w != v)]) for v in S]
                 for S in labels]
    want = d_np[u - 1]
    wanted = [(want, r) for r in range(binomial(universe, t))]
    try:
        return gf2.solve(equations, known, wanted)
    except gf2.Undetermined as exc:
        return f"virtual user {u}: {exc}"  # cached like a plan


def yma_decode(u: int, cache: CacheContent, delivered: Sequence[tuple[tuple[int, ...], int]],
               d_np: Sequence[int], n_files: int, t: int) -> tuple[int, ...]:
    """Recover file d_np(u) for virtual user u by GF(2) elimination.

    Unknowns are the uncached subfiles, each delivered pair is one equation,
    cached subfiles are constants. Raises :class:`DecodeError` when the
    system leaves a needed subfile undetermined.
    """
    d_np = tuple(d_np)
    labels = tuple(S for S, _ in delivered)
    payload = [block for _, block in delivered]
    recipes = _decode_plan(n_files, len(d_np), t, d_np, u, cache.keys(), labels)
    if isinstance(recipes, str):
        raise DecodeError(recipes)
    return gf2.apply(recipes, payload, cache.as_dict())


def yma_rate(n_files: int, n_users: int, t: int) -> Fraction:
    """Worst-case delivery rate (C(K',t+1) - C(K'-min(N,K'),t+1)) / C(K',t)."""
    if not 0 <= t <= n_users:
        raise ValueError(f"t={t} outside [0, {n_users}]")
    r = min(n_files, n_users)
    return Fraction(binomial(n_users, t + 1) - binomial(n_users - r, t + 1), binomial(n_users, t))
