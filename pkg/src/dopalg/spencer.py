"""Symbols, prolongations and Spencer delta-cohomology over the rationals.

A symbol g_q is a subspace of S_q T* (x) F with coordinates v^k_mu, mu an
exponent tuple with |mu| = q and k indexing the fiber F.  We use plain
multi-index coordinates with no multiplicity weights: the formal derivative
is (d_i v)^k_nu = v^k_{nu + e_i}, and

    (delta w)_J = sum_{i in J} (-1)^{position of i in J} d_i w_{J minus i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

from .linalg import kernel, rank
from .ops import OpMatrix
from .scalars import ZERO, mpq

__all__ = [
    "DeltaComplexReport",
    "SymbolSpace",
    "conformal_symbol",
    "delta_complex",
    "full_symbol",
    "killing_symbol",
    "killing_symbol_by_formula",
    "lanczos_space",
    "prolong",
    "symbol_of",
]


def exponents(n: int, q: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree q, lexicographically decreasing."""
    if n == 1:
        return [(q,)]
    out = []
    for a in range(q, -1, -1):
        for rest in exponents(n - 1, q - a):
            out.append((a,) + rest)
    return out


@dataclass
class SymbolSpace:
    n: int
    q: int
    fiber: int
    constraints: list[dict] = field(default_factory=list)

    @cached_property
    def coords(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(k, mu) for mu in exponents(self.n, self.q) for k in range(self.fiber)]

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.coords)}

    def matrix(self) -> list[list]:
        N = len(self.coords)
        rows = []
        for c in self.constraints:
            row = [ZERO] * N
            for key, v in c.items():
                row[self.index[key]] = mpq(v)
            rows.append(row)
        return rows

    @cached_property
    def basis(self) -> list[dict]:
        """Basis vectors of g_q as sparse {coord: value} dicts."""
        N = len(self.coords)
        if not self.constraints:
            return [{c: mpq(1)} for c in self.coords]
        out = []
        for v in kernel(self.matrix(), N):
            out.append({self.coords[i]: x for i, x in enumerate(v) if x})
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)


def full_symbol(n: int, q: int = 1, fiber: int | None = None) -> SymbolSpace:
    return SymbolSpace(n, q, n if fiber is None else fiber)


def symbol_of(D: OpMatrix, q: int | None = None) -> SymbolSpace:
    """Order-q symbol of a constant-coefficient operator (columns = fiber)."""
    if not D.is_constant_coeff():
        raise ValueError("symbols are computed for constant-coefficient operators")
    q = int(D.order()) if q is None else q
    cons = []
    for r in D.rows:
        c = {}
        for k, e in enumerate(r):
            for mu, a in e.terms.items():
                if sum(mu) == q:
                    c[(k, mu)] = a
        if c:
            cons.append(c)
    return SymbolSpace(D.ctx.n, q, D.ncols, cons)


def killing_symbol(n: int, signature=None) -> SymbolSpace:
    from .catalog import MetricSpec, killing

    return symbol_of(killing(MetricSpec(n, tuple(signature) if signature else ())).matrix)


def killing_symbol_by_formula(n: int, signature=None) -> SymbolSpace:
    """omega_rj v^r_i + omega_ir v^r_j = 0, written out directly."""
    sig = list(signature) if signature else [1] * n
    e = lambda i: tuple(1 if t == i else 0 for t in range(n))
    cons = []
    for i in range(n):
        for j in range(i, n):
            c: dict = {}
            c[(j, e(i))] = c.get((j, e(i)), 0) + sig[j]
            c[(i, e(j))] = c.get((i, e(j)), 0) + sig[i]
            cons.append(c)
    return SymbolSpace(n, 1, n, cons)


def conformal_symbol(n: int, signature=None) -> SymbolSpace:
    from .catalog import MetricSpec, conformal_killing

    return symbol_of(conformal_killing(MetricSpec(n, tuple(signature) if signature else ())).matrix)


def prolong(g: SymbolSpace) -> SymbolSpace:
    """g_{q+1}: every formal derivative of w lies in g_q."""
    cons = []
    for i in range(g.n):
        for c in g.constraints:
            row = {}
            for (k, mu), v in c.items():
                nu = tuple(m + (1 if t == i else 0) for t, m in enumerate(mu))
                row[(k, nu)] = row.get((k, nu), 0) + v
            cons.append(row)
    return SymbolSpace(g.n, g.q + 1, g.fiber, cons)


def _delta(vec: dict, n: int) -> dict:
    """delta on an ambient vector {(J, k, mu): value} of Lambda^s (x) S_q (x) F."""
    out: dict = {}
    for (J, k, mu), v in vec.items():
        for i in range(n):
            if i in J or mu[i] == 0:
                continue
            K = tuple(sorted(J + (i,)))
            sign = -1 if K.index(i) % 2 else 1
            nu = tuple(m - (1 if t == i else 0) for t, m in enumerate(mu))
            key = (K, k, nu)
            s = out.get(key, 0) + sign * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _delta_rank(g: SymbolSpace, s: int, check_square: bool = False):
    """Rank of delta on Lambda^s (x) g_q, plus whether delta o delta vanishes there."""
    n = g.n
    images = []
    square_ok = True
    for J in combinations(range(n), s):
        for b in g.basis:
            vec = {(J, k, mu): v for (k, mu), v in b.items()}
            img = _delta(vec, n)
            images.append(img)
            if check_square and img and _delta(img, n):
                square_ok = False
    keys = sorted({k for im in images for k in im})
    if not keys:
        return 0, square_ok
    idx = {k: i for i, k in enumerate(keys)}
    rows = []
    for im in images:
        row = [ZERO] * len(keys)
        for k, v in im.items():
            row[idx[k]] = mpq(v)
        rows.append(row)
    return rank(rows, len(keys)), square_ok


@dataclass
class DeltaComplexReport:
    n: int
    q: int
    dims: dict
    ranks_out: dict
    ranks_in: dict
    cohomology: dict
    delta_squared_zero: bool
    prolongation_dims: dict

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "dims": {str(k): v for k, v in self.dims.items()},
            "ranks_out": {str(k): v for k, v in self.ranks_out.items()},
            "ranks_in": {str(k): v for k, v in self.ranks_in.items()},
            "cohomology": {str(k): v for k, v in self.cohomology.items()},
            "delta_squared_zero": self.delta_squared_zero,
            "prolongation_dims": {str(k): v for k, v in self.prolongation_dims.items()},
        }


def delta_complex(g: SymbolSpace, s_max: int | None = None) -> DeltaComplexReport:
    """H^s(g_q) = ker(delta on Lambda^s g_q) / delta(Lambda^{s-1} g_{q+1})."""
    n = g.n
    s_max = n if s_max is None else s_max
    if s_max > n:
        raise ValueError("s_max cannot exceed n")
    g1 = prolong(g)
    g2 = prolong(g1)
    dims, out, inn, coh = {}, {}, {}, {}
    sq_ok = True
    for s in range(0, s_max + 1):
        dims[s] = comb(n, s) * g.dim
        if g.q == 0:
            out[s] = 0
        else:
            out[s], ok = _delta_rank(g, s, check_square=True)
            sq_ok = sq_ok and ok
        if s == 0:
            inn[s] = 0
        else:
            inn[s], ok = _delta_rank(g1, s - 1, check_square=True)
            sq_ok = sq_ok and ok
        coh[s] = dims[s] - out[s] - inn[s]
    return DeltaComplexReport(n, g.q, dims, out, inn, coh, sq_ok,
                              {g.q: g.dim, g.q + 1: g1.dim, g.q + 2: g2.dim})


def lanczos_space(n: int = 4):
    """Subspace of Lambda^2 T* (x) T* cut by the cyclic identity.

    Coordinates L_{ij,k} with i < j; returns (dimension, constraint rows).
    """
    coords = [((i, j), k) for i, j in combinations(range(n), 2) for k in range(n)]
    idx = {c: t for t, c in enumerate(coords)}

    def entry(a, b, k):
        # L_{ab,k} in terms of stored coordinates (antisymmetric in ab)
        if a == b:
            return None, 0
        return (((a, b), k), 1) if a < b else (((b, a), k), -1)

    rows = []
    for i, j, k in combinations(range(n), 3):
        row = [ZERO] * len(coords)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            key, sgn = entry(a, b, c)
            if key is not None:
                row[idx[key]] += sgn
        rows.append(row)
    r = rank(rows, len(coords)) if rows else 0
    return len(coords) - r, rows
