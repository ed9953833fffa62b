"""Independent reference decoders used to validate the production codec.

Nothing here shares decode logic with ltlink.lt: recovery is decided by
Gaussian elimination over GF(2) on the neighbor-set incidence matrix,
with rows as Python int bitmasks. If elimination over the same symbols
recovers the message, the peeling decoder must either agree or have
consumed strictly fewer equations than full rank requires (peeling is
weaker than elimination only through unpeeled cycles, which the trials
in test_lt quantify; completeness claims are always cross-checked in
the elimination direction: peeling success implies elimination success).
"""

from __future__ import annotations

import numpy as np

from ltlink.lt import EncodedSymbol, neighbors_of
from ltlink.soliton import DegreeDistribution


def gf2_decode(symbols, dist: DegreeDistribution):
    """Solve the XOR system by row reduction; None if rank < k.

    Returns the recovered uint32 message array when the symbols carry
    full rank, else None. Augmented column is the 32-bit payload.
    """
    k = dist.k
    rows: list[int] = []
    pays: list[int] = []
    for sym in symbols:
        mask = 0
        for j in neighbors_of(sym.seed, dist).tolist():
            mask |= 1 << j
        rows.append(mask)
        pays.append(sym.payload)

    pivot_row_for: dict[int, int] = {}
    for i in range(len(rows)):
        mask, pay = rows[i], pays[i]
        while mask:
            lead = mask.bit_length() - 1
            if lead in pivot_row_for:
                r = pivot_row_for[lead]
                mask ^= rows[r]
                pay ^= pays[r]
            else:
                pivot_row_for[lead] = i
                rows[i], pays[i] = mask, pay
                break
        else:
            rows[i], pays[i] = 0, pay

    if len(pivot_row_for) < k:
        return None

    # back-substitute in increasing pivot order: each stored pivot row
    # keeps only bits strictly below its lead, which are already solved
    out = np.zeros(k, dtype=np.uint32)
    for lead in sorted(pivot_row_for):
        r = pivot_row_for[lead]
        mask, pay = rows[r], pays[r]
        rest = mask & ~(1 << lead)
        while rest:
            j = rest.bit_length() - 1
            pay ^= int(out[j])
            rest &= ~(1 << j)
        out[lead] = pay
    return out


def gf2_rank(symbols, dist: DegreeDistribution) -> int:
    """Rank of the symbol incidence matrix over GF(2)."""
    rows = []
    for sym in symbols:
        mask = 0
        for j in neighbors_of(sym.seed, dist).tolist():
            mask |= 1 << j
        rows.append(mask)
    basis: list[int] = []
    rank = 0
    for mask in rows:
        for b in basis:
            mask = min(mask, mask ^ b)
        if mask:
            basis.append(mask)
            basis.sort(reverse=True)
            rank += 1
    return rank


def batch_peel(symbols, dist: DegreeDistribution):
    """Whole-batch peeling reimplementation (dict/list based, no ripple).

    A second opinion for the incremental decoder: repeatedly find any
    symbol with exactly one unresolved neighbor and substitute. Returns
    the recovered array or None if peeling stalls before completion.
    """
    k = dist.k
    recovered: list[int | None] = [None] * k
    work = []
    for sym in symbols:
        work.append([set(neighbors_of(sym.seed, dist).tolist()), sym.payload])

    changed = True
    count = 0
    while changed and count < k:
        changed = False
        for entry in work:
            live = {j for j in entry[0] if recovered[j] is None}
            pay = entry[1]
            for j in entry[0] - live:
                pay ^= recovered[j]
            entry[0], entry[1] = live, pay
            if len(live) == 1:
                (j,) = live
                recovered[j] = pay
                count += 1
                entry[0] = set()
                changed = True
    if count < k:
        return None
    return np.array(recovered, dtype=np.uint32)
