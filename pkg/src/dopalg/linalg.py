"""Dense exact linear algebra over the coefficient field.

Entries may be ``mpq`` or :class:`~dopalg.scalars.RationalFunction`; only
field operations and truthiness (nonzero test) are used.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ONE, ZERO

__all__ = ["kernel", "rank", "rref"]


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = ONE / pr[c]
        if inv != ONE:
            pr = m[r] = [inv * v if v else v for v in pr]
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for j in nz:
                        row[j] = row[j] - f * pr[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def kernel(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {v : M v = 0}, one vector per free column."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(piv):
            if red[r][f]:
                v[pc] = -red[r][f]
        basis.append(v)
    return basis
