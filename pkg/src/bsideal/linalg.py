"""Exact sparse linear algebra over the rationals.

Rows are dicts mapping column index to coefficient.  Elimination runs
fraction-free on integer rows (cross-multiplied updates, gcd-normalized)
so intermediate values stay integral; rational answers appear only when
solutions are read off.  Pivot selection is deterministic, so reduced
forms, nullspace bases, and particular solutions are reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

IntRow = dict[int, int]
FracRow = dict[int, Fraction]


def clear_row(row: dict[int, Fraction | int]) -> IntRow:
    """Scale one equation so all coefficients are coprime integers."""
    items = [(j, Fraction(c)) for j, c in row.items() if c]
    if not items:
        return {}
    lcm = 1
    for _, c in items:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = {j: int(c * lcm) for j, c in items}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    return {j: v // g for j, v in ints.items()}


def _normalize(row: IntRow) -> IntRow:
    row = {j: v for j, v in row.items() if v}
    if not row:
        return row
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    lead = min(row)
    if row[lead] < 0:
        g = -g
    return {j: v // g for j, v in row.items()}


def _eliminate(row: IntRow, piv: IntRow, col: int) -> IntRow:
    """Fraction-free update: piv[col]*row - row[col]*piv."""
    a = piv[col]
    b = row.get(col, 0)
    if not b:
        return row
    out = {j: a * v for j, v in row.items()}
    for j, v in piv.items():
        s = out.get(j, 0) - b * v
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return _normalize(out)


def rref(
    rows: Iterable[dict[int, Fraction | int]], pivot_limit: int | None = None
) -> list[tuple[int, IntRow]]:
    """Fully reduced echelon form.

    Returns (pivot_column, row) pairs sorted by pivot column; every row is
    primitive with positive pivot.  Columns >= pivot_limit are never chosen
    as pivots (used to keep an augmented right-hand side out of the basis).
    """
    work: list[IntRow] = []
    for r in rows:
        nr = _normalize(clear_row(r))
        if nr:
            work.append(nr)
    placed: list[tuple[int, IntRow]] = []
    all_cols = sorted({j for r in work for j in r})
    for col in all_cols:
        if pivot_limit is not None and col >= pivot_limit:
            continue
        best = None
        for idx, r in enumerate(work):
            if col in r and (best is None or len(r) < len(work[best])):
                best = idx
        if best is None:
            continue
        piv = work.pop(best)
        if piv[col] < 0:
            piv = {j: -v for j, v in piv.items()}
        work = [_eliminate(r, piv, col) for r in work]
        work = [r for r in work if r]
        placed = [(c, _eliminate(r, piv, col)) for c, r in placed]
        placed.append((col, piv))
    leftovers = [r for r in work if r]
    placed.sort(key=lambda t: t[0])
    # rows with no eligible pivot column (pure right-hand side) keep pivot -1
    return placed + [(-1, r) for r in leftovers]


def nullspace(
    rows: Iterable[dict[int, Fraction | int]], ncols: int
) -> list[FracRow]:
    """Basis of the right nullspace, one vector per free column, ascending."""
    reduced = rref(rows, pivot_limit=ncols)
    pivots = {c: r for c, r in reduced if c >= 0}
    basis: list[FracRow] = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec: FracRow = {f: Fraction(1)}
        for p, r in pivots.items():
            if f in r:
                vec[p] = Fraction(-r[f], r[p])
        basis.append(vec)
    return basis


def solve(
    aug_rows: Iterable[dict[int, Fraction | int]], ncols: int
) -> list[Fraction] | None:
    """Particular solution of an augmented system, free variables set to 0.

    Each row encodes sum(row[j]*x_j for j < ncols) == row.get(ncols, 0).
    Returns None when inconsistent.
    """
    reduced = rref(aug_rows, pivot_limit=ncols)
    x = [Fraction(0)] * ncols
    for c, r in reduced:
        if c < 0:
            if any(j == ncols and v for j, v in r.items()):
                return None
            continue
        x[c] = Fraction(r.get(ncols, 0), r[c])
    return x


def rref_rational(
    rows: Iterable[dict[int, Fraction | int]], ncols: int
) -> list[tuple[int, FracRow]]:
    """Reduced echelon rows scaled monic (pivot coefficient 1)."""
    out: list[tuple[int, FracRow]] = []
    for c, r in rref(rows, pivot_limit=ncols):
        if c < 0:
            raise ValueError("row without eligible pivot column")
        lead = r[c]
        out.append((c, {j: Fraction(v, lead) for j, v in r.items()}))
    return out
