"""Brute-force check of cc() on graded constant-coefficient operators.

For a constant-coefficient D whose entries are homogeneous (D_ij of degree
rw_i - cw_j), the left relations L with L D = 0 form a graded module.  In
degree k the relations are found by plain linear algebra: write every entry
l_i as an unknown homogeneous polynomial of degree k - rw_i and solve
l D = 0.  The module generated by a computed CC contributes the span of the
products d^nu L_j of degree k.  The two dimensions agree in every degree iff
the CC generates all relations up to that degree.

Linear algebra here goes through sympy's DomainMatrix so the check does not
share code with the engine's own Gröbner and row-reduction routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .ops import OpMatrix

__all__ = ["NotGraded", "OracleReport", "graded_weights", "relation_dims", "check_cc"]


class NotGraded(ValueError):
    pass


def _monomials(n: int, k: int) -> list[tuple[int, ...]]:
    if k < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n), k):
        mu = [0] * n
        for i in combo:
            mu[i] += 1
        out.append(tuple(mu))
    return out


def _qq(c):
    return QQ(int(c.numerator), int(c.denominator))


def graded_weights(D: OpMatrix, col_weights: Sequence[int] | None = None) -> list[int]:
    """Row degrees that make D homogeneous, or NotGraded."""
    if not D.is_constant_coeff():
        raise NotGraded("variable coefficients")
    cw = list(col_weights) if col_weights is not None else [0] * D.ncols
    rw = []
    for r in D.rows:
        degs = {sum(mu) + cw[j] for j, e in enumerate(r) for mu in e.terms}
        if len(degs) > 1:
            raise NotGraded(f"row mixes degrees {sorted(degs)}")
        rw.append(degs.pop() if degs else 0)
    return rw


def _rank(rows: list[dict], ncols: int) -> int:
    rows = [r for r in rows if r]
    if not rows or not ncols:
        return 0
    M = DomainMatrix({i: r for i, r in enumerate(rows)}, (len(rows), ncols), QQ)
    return M.rank()


def relation_dims(D: OpMatrix, k: int, col_weights: Sequence[int] | None = None) -> tuple[int, list]:
    """Dimension of degree-k relations, and the coordinate list used."""
    n = D.ctx.n
    cw = list(col_weights) if col_weights is not None else [0] * D.ncols
    rw = graded_weights(D, cw)
    coords = [(i, mu) for i in range(D.nrows) for mu in _monomials(n, k - rw[i])]
    outs = {}
    rows = []
    for i, mu in coords:
        r: dict = {}
        for j, e in enumerate(D.rows[i]):
            for nu, c in e.terms.items():
                key = (j, tuple(a + b for a, b in zip(mu, nu)))
                idx = outs.setdefault(key, len(outs))
                v = r.get(idx, QQ(0)) + _qq(c)
                if v:
                    r[idx] = v
                else:
                    r.pop(idx, None)
        rows.append(r)
    # dim of the kernel of coords -> outputs
    return len(coords) - _rank(rows, len(outs)), coords


def _generated_dim(L: OpMatrix, rw_D: list[int], k: int, coords: list) -> int:
    n = L.ctx.n
    idx = {c: t for t, c in enumerate(coords)}
    degL = graded_weights(L, rw_D)
    rows = []
    for j, row in enumerate(L.rows):
        for nu in _monomials(n, k - degL[j]):
            r: dict = {}
            for i, e in enumerate(row):
                for mu, c in e.terms.items():
                    key = (i, tuple(a + b for a, b in zip(mu, nu)))
                    t = idx[key]
                    v = r.get(t, QQ(0)) + _qq(c)
                    if v:
                        r[t] = v
                    else:
                        r.pop(t, None)
            rows.append(r)
    return _rank(rows, len(coords))


@dataclass
class OracleReport:
    degrees: list[int]
    brute: list[int]
    generated: list[int]

    @property
    def agree(self) -> bool:
        return self.brute == self.generated


def check_cc(D: OpMatrix, L: OpMatrix, col_weights: Sequence[int] | None = None, extra: int = 2) -> OracleReport:
    """Compare relation dimensions of D with the span of L in each degree.

    Degrees run from the lowest row degree of D up to the top degree of L
    plus ``extra``.
    """
    if not (L @ D).is_zero():
        raise ValueError("L D is not zero")
    cw = list(col_weights) if col_weights is not None else [0] * D.ncols
    rw = graded_weights(D, cw)
    top = max(graded_weights(L, rw), default=max(rw, default=0)) + extra
    degs, brute, gen = [], [], []
    for k in range(min(rw, default=0), top + 1):
        b, coords = relation_dims(D, k, cw)
        g = _generated_dim(L, rw, k, coords)
        degs.append(k)
        brute.append(b)
        gen.append(g)
    return OracleReport(degs, brute, gen)
