"""Symbol-level Gaussian elimination over GF(2).

Each equation says: the XOR of a set of symbols equals one received payload
block. Symbols the decoder already holds are folded into the right-hand
side. Elimination works on 0/1 coefficient rows stored as int bitmasks, so
its cost does not depend on the block width; the resulting plan is then
applied to the actual b-bit blocks with plain XORs.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

# a recovery recipe: XOR of these payload positions and these known symbols
Recipe = tuple[tuple[int, ...], tuple[Hashable, ...]]


class Undetermined(Exception):
    """The received equations do not pin down a wanted symbol."""

    def __init__(self, symbol):
        super().__init__(f"symbol {symbol!r} is not determined by the received equations")
        self.symbol = symbol


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def solve(
    equations: Sequence[Iterable[Hashable]],
    known: Iterable[Hashable],
    wanted: Sequence[Hashable],
) -> tuple[Recipe, ...]:
    """Return one recipe per wanted symbol, or raise :class:`Undetermined`."""
    known = set(known)
    unknown_ids: dict[Hashable, int] = {}
    known_ids: dict[Hashable, int] = {}
    rows = []  # [unknown mask, payload mask, known mask]
    for j, eq in enumerate(equations):
        u_mask = k_mask = 0
        for sym in eq:
            if sym in known:
                k_mask ^= 1 << known_ids.setdefault(sym, len(known_ids))
            else:
                u_mask ^= 1 << unknown_ids.setdefault(sym, len(unknown_ids))
        rows.append([u_mask, 1 << j, k_mask])

    # reduced row echelon form
    pivots: dict[int, list[int]] = {}
    for row in rows:
        for col, prow in pivots.items():
            if row[0] >> col & 1:
                row[0] ^= prow[0]
                row[1] ^= prow[1]
                row[2] ^= prow[2]
        if not row[0]:
            continue
        col = (row[0] & -row[0]).bit_length() - 1
        for prow in pivots.values():
            if prow[0] >> col & 1:
                prow[0] ^= row[0]
                prow[1] ^= row[1]
                prow[2] ^= row[2]
        pivots[col] = row

    known_by_id = {i: s for s, i in known_ids.items()}
    recipes = []
    for sym in wanted:
        if sym in known:
            recipes.append(((), (sym,)))
            continue
        col = unknown_ids.get(sym)
        row = pivots.get(col) if col is not None else None
        # determined iff its pivot row has no free columns left
        if row is None or row[0] != 1 << col:
            raise Undetermined(sym)
        recipes.append((tuple(_bits(row[1])), tuple(known_by_id[i] for i in _bits(row[2]))))
    return tuple(recipes)


def apply(recipes: Sequence[Recipe], payload: Sequence[int], known: Mapping[Hashable, int]) -> tuple[int, ...]:
    out = []
    for positions, syms in recipes:
        value = 0
        for j in positions:
            value ^= payload[j]
        for s in syms:
            value ^= known[s]
        out.append(value)
    return tuple(out)
