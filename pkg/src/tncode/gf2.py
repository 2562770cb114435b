"""GF(2) elimination on rows stored as Python integers (bit j = column j)."""

from __future__ import annotations

from typing import Sequence


def rref(rows: Sequence[int], ncols: int | None = None) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form, eliminating columns from bit 0 upward.

    Returns the nonzero reduced rows (sorted by pivot) and their pivot columns.
    Only the lowest ``ncols`` bits take part in pivoting when given; higher
    bits ride along (useful for tracking row operations).
    """
    mask = -1 if ncols is None else (1 << ncols) - 1
    pivots: dict[int, int] = {}
    for r in rows:
        r = _reduce(r, pivots, mask)
        if r & mask == 0:
            continue
        col = ((r & mask) & -(r & mask)).bit_length() - 1
        # back-substitute so every other row has a zero in this column
        for c, pr in pivots.items():
            if (pr >> col) & 1:
                pivots[c] = pr ^ r
        pivots[col] = r
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def _reduce(r: int, pivots: dict[int, int], mask: int) -> int:
    for c, pr in pivots.items():
        if (r >> c) & 1:
            r ^= pr
    return r


def reduce(r: int, rows: Sequence[int], pivots: Sequence[int]) -> int:
    """Reduce ``r`` against an RREF basis returned by :func:`rref`."""
    for c, pr in zip(pivots, rows):
        if (r >> c) & 1:
            r ^= pr
    return r


def rank(rows: Sequence[int], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[0])


def in_span(r: int, rows: Sequence[int], pivots: Sequence[int]) -> bool:
    return reduce(r, rows, pivots) == 0


def right_inverse_columns(rows: Sequence[int], ncols: int) -> list[int]:
    """For a full-row-rank matrix A (rows as ints over ``ncols`` columns), return
    vectors v_i with A v_i = e_i, i.e. row j dotted with v_i equals delta_ij.
    """
    m = len(rows)
    tracked = [r | (1 << (ncols + i)) for i, r in enumerate(rows)]
    red, cols = rref(tracked, ncols)
    if len(red) != m:
        raise ValueError("matrix does not have full row rank")
    sols = [0] * m
    for row, col in zip(red, cols):
        t = row >> ncols
        while t:
            low = t & -t
            i = low.bit_length() - 1
            sols[i] |= 1 << col
            t ^= low
    return sols
