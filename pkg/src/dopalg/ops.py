"""The operator ring D = K[d1..dn] and matrices over it.

An operator is stored in normal form: a map from derivative multi-index to a
nonzero coefficient, with every coefficient to the left of its derivative.
Products follow the Weyl rule d_i a = a d_i + da/dx_i.
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .scalars import Coeff, ONE, ZERO, VarContext, coerce, diff, format_coeff, is_const, is_zero, substitute

__all__ = [
    "DiffOp",
    "NEG_INF",
    "OpMatrix",
    "ZeroWeight",
    "normalize",
]

NEG_INF = float("-inf")

Multi = tuple[int, ...]


class ZeroWeight(ValueError):
    pass


def _sub_indices(mu: Multi):
    """All kappa <= mu with the multinomial factor prod C(mu_i, kappa_i)."""
    for kappa in product(*(range(m + 1) for m in mu)):
        f = 1
        for m, k in zip(mu, kappa):
            f *= comb(m, k)
        yield kappa, f


def _deriv(a: Coeff, kappa: Multi) -> Coeff:
    for i, k in enumerate(kappa):
        for _ in range(k):
            if is_zero(a):
                return a
            a = diff(a, i)
    return a


def _add_term(terms: dict, mu: Multi, c: Coeff) -> None:
    if is_zero(c):
        return
    old = terms.get(mu)
    if old is None:
        terms[mu] = c
        return
    s = old + c
    if is_zero(s):
        del terms[mu]
    else:
        terms[mu] = s


class DiffOp:
    """sum_mu a_mu d^mu over a fixed :class:`VarContext`."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Multi, Coeff] | None = None):
        self.ctx = ctx
        clean = {}
        if terms:
            for mu, c in terms.items():
                mu = tuple(mu)
                if len(mu) != ctx.n:
                    raise ValueError(f"multi-index {mu} does not match n={ctx.n}")
                _add_term(clean, mu, coerce(c))
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, ctx: VarContext) -> "DiffOp":
        return cls(ctx)

    @classmethod
    def const(cls, ctx: VarContext, c) -> "DiffOp":
        return cls(ctx, {(0,) * ctx.n: c})

    @classmethod
    def one(cls, ctx: VarContext) -> "DiffOp":
        return cls.const(ctx, ONE)

    @classmethod
    def d(cls, ctx: VarContext, *idx: int, coeff=ONE) -> "DiffOp":
        """coeff * d_{idx[0]} d_{idx[1]} ... (zero-based indices)."""
        mu = [0] * ctx.n
        for i in idx:
            mu[i] += 1
        return cls(ctx, {tuple(mu): coeff})

    @classmethod
    def _raw(cls, ctx: VarContext, terms: dict) -> "DiffOp":
        op = cls.__new__(cls)
        op.ctx = ctx
        op.terms = terms
        op._hash = None
        return op

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self):
        if not self.terms:
            return NEG_INF
        return max(sum(mu) for mu in self.terms)

    def is_constant_coeff(self) -> bool:
        return all(is_const(c) or not c.depends_on_base() for c in self.terms.values())

    def is_homogeneous(self) -> bool:
        return len({sum(mu) for mu in self.terms}) <= 1

    def coeff(self, mu: Multi) -> Coeff:
        return self.terms.get(tuple(mu), ZERO)

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.ctx == other.ctx and self.terms == other.terms
        if not self.terms:
            return is_zero(coerce(other)) if isinstance(other, (int,)) else False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "DiffOp"):
        if other.ctx != self.ctx:
            raise ValueError("operators over different contexts")

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.const(self.ctx, other)
        self._check(other)
        terms = dict(self.terms)
        for mu, c in other.terms.items():
            _add_term(terms, mu, c)
        return DiffOp._raw(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._raw(self.ctx, {mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.const(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DiffOp":
        """Left multiplication by the coefficient c."""
        c = coerce(c)
        if is_zero(c):
            return DiffOp.zero(self.ctx)
        return DiffOp._raw(self.ctx, {mu: c * a for mu, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.const(self.ctx, other)
        self._check(other)
        terms: dict = {}
        for mu, a in self.terms.items():
            for nu, b in other.terms.items():
                if is_const(b) or not b.depends_on_base():
                    _add_term(terms, tuple(m + v for m, v in zip(mu, nu)), a * b)
                    continue
                for kappa, f in _sub_indices(mu):
                    db = _deriv(b, kappa)
                    if is_zero(db):
                        continue
                    shift = tuple(m - k + v for m, k, v in zip(mu, kappa, nu))
                    _add_term(terms, shift, a * db * f)
        return DiffOp._raw(self.ctx, terms)

    def __rmul__(self, other):
        return DiffOp.const(self.ctx, other) * self

    def __matmul__(self, other):
        return self * other

    def adjoint(self) -> "DiffOp":
        """ad(a d^mu) = (-1)^|mu| d^mu a, normalized."""
        terms: dict = {}
        for mu, a in self.terms.items():
            sign = -1 if sum(mu) % 2 else 1
            if is_const(a) or not a.depends_on_base():
                _add_term(terms, mu, a * sign)
                continue
            for kappa, f in _sub_indices(mu):
                da = _deriv(a, kappa)
                if is_zero(da):
                    continue
                _add_term(terms, tuple(m - k for m, k in zip(mu, kappa)), da * (sign * f))
        return DiffOp._raw(self.ctx, terms)

    def apply(self, f) -> Coeff:
        """The action sum a_mu d^mu f on a coefficient or ring polynomial."""
        f = self.ctx.poly(f)
        total = ZERO
        for mu, a in self.terms.items():
            total = total + a * _deriv(f, mu)
        return total

    def substitute(self, target: VarContext, values: Mapping[str, Coeff]) -> "DiffOp":
        if target.base_vars != self.ctx.base_vars:
            raise ValueError("substitution cannot change the base variables")
        return DiffOp(target, {mu: substitute(c, target, values) for mu, c in self.terms.items()})

    # -- display ------------------------------------------------------
    def sorted_terms(self):
        """Terms by decreasing order, then lexicographically decreasing."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-m for m in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ctx.base_vars
        out = []
        for mu, c in self.sorted_terms():
            dpart = "".join(f"d{names[i]}" + (f"^{m}" if m > 1 else "") for i, m in enumerate(mu) if m)
            cs = format_coeff(c)
            neg = cs.startswith("-") and (is_const(c) or len(c.num) == 1)
            if neg:
                cs = cs[1:]
            if not is_const(c) and len(c.num) > 1 and c.den == c.ctx.ring.one:
                cs = f"({cs})"
            if dpart:
                body = dpart if cs == "1" else f"{cs}*{dpart}"
            else:
                body = cs
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"DiffOp({str(self)!r})"


def normalize(ctx: VarContext, words: Iterable[Sequence]) -> DiffOp:
    """Normal form of a sum of words.

    Each word is a sequence of factors read left to right; a factor is an int
    ``i`` standing for d_i (zero-based), a string naming a base variable's
    derivative, or a coefficient (anything :func:`coerce` accepts, or a
    :class:`~dopalg.scalars.RationalFunction`).
    """
    total = DiffOp.zero(ctx)
    for word in words:
        acc = DiffOp.one(ctx)
        for f in word:
            if isinstance(f, bool):
                raise TypeError("bool is not a factor")
            if isinstance(f, int):
                acc = acc * DiffOp.d(ctx, f)
            elif isinstance(f, str):
                acc = acc * DiffOp.d(ctx, ctx.index(f))
            elif isinstance(f, DiffOp):
                acc = acc * f
            else:
                acc = acc * DiffOp.const(ctx, f)
        total = total + acc
    return total


class OpMatrix:
    """r x m matrix over D acting on columns of unknowns."""

    __slots__ = ("ctx", "rows", "nrows", "ncols")

    def __init__(self, ctx: VarContext, rows: Sequence[Sequence[DiffOp]], ncols: int | None = None):
        self.ctx = ctx
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("a matrix with no rows needs an explicit column count")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            for e in r:
                if not isinstance(e, DiffOp) or e.ctx != ctx:
                    raise ValueError("matrix entries must be operators over the matrix context")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, ctx: VarContext, r: int, m: int) -> "OpMatrix":
        z = DiffOp.zero(ctx)
        return cls(ctx, [[z] * m for _ in range(r)], m)

    @classmethod
    def identity(cls, ctx: VarContext, m: int) -> "OpMatrix":
        z, o = DiffOp.zero(ctx), DiffOp.one(ctx)
        return cls(ctx, [[o if i == j else z for j in range(m)] for i in range(m)], m)

    @classmethod
    def from_rows(cls, ctx: VarContext, rows, ncols: int) -> "OpMatrix":
        return cls(ctx, rows, ncols)

    # -- queries ------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def order(self):
        return max((e.order() for r in self.rows for e in r), default=NEG_INF)

    def row_order(self, i: int):
        return max((e.order() for e in self.rows[i]), default=NEG_INF)

    def is_constant_coeff(self) -> bool:
        return all(e.is_constant_coeff() for r in self.rows for e in r)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other):
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    # -- algebra ------------------------------------------------------
    def compose(self, other: "OpMatrix") -> "OpMatrix":
        """(A o B)[i][j] = sum_k A[i][k] B[k][j]."""
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        if self.ctx != other.ctx:
            raise ValueError("matrices over different contexts")
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = DiffOp.zero(self.ctx)
                for k, a in enumerate(r):
                    if a.terms:
                        b = other.rows[k][j]
                        if b.terms:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return OpMatrix(self.ctx, out, other.ncols)

    __matmul__ = compose

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return OpMatrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return OpMatrix(self.ctx, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "OpMatrix":
        return OpMatrix(self.ctx, [[a.scale(c) for a in r] for r in self.rows], self.ncols)

    def adjoint(self) -> "OpMatrix":
        """ad(A)[i][j] = ad(A[j][i])."""
        rows = [[self.rows[j][i].adjoint() for j in range(self.nrows)] for i in range(self.ncols)]
        return OpMatrix(self.ctx, rows, self.nrows)

    def transpose(self) -> "OpMatrix":
        rows = [[self.rows[j][i] for j in range(self.nrows)] for i in range(self.ncols)]
        return OpMatrix(self.ctx, rows, self.nrows)

    def weight_rescale(self, row_weights, col_weights) -> "OpMatrix":
        rw = [coerce(w) for w in row_weights]
        cw = [coerce(w) for w in col_weights]
        if len(rw) != self.nrows or len(cw) != self.ncols:
            raise ValueError("weight lists do not match the matrix shape")
        if any(is_zero(w) for w in rw + cw):
            raise ZeroWeight("weights must be nonzero")
        # weights are constants, so they commute with every d_i
        return OpMatrix(
            self.ctx,
            [[a.scale(rw[i] * cw[j]) for j, a in enumerate(r)] for i, r in enumerate(self.rows)],
            self.ncols,
        )

    def select_rows(self, idx: Iterable[int]) -> "OpMatrix":
        return OpMatrix(self.ctx, [self.rows[i] for i in idx], self.ncols)

    def stack(self, other: "OpMatrix") -> "OpMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return OpMatrix(self.ctx, self.rows + other.rows, self.ncols)

    def apply(self, fs: Sequence) -> list:
        if len(fs) != self.ncols:
            raise ValueError("wrong number of functions")
        out = []
        for r in self.rows:
            total = ZERO
            for a, f in zip(r, fs):
                if a.terms:
                    total = total + a.apply(f)
            out.append(total)
        return out

    def substitute(self, target: VarContext, values: Mapping[str, Coeff]) -> "OpMatrix":
        return OpMatrix(target, [[a.substitute(target, values) for a in r] for r in self.rows], self.ncols)

    def with_context(self, target: VarContext) -> "OpMatrix":
        return self.substitute(target, {})

    def __str__(self):
        if not self.rows:
            return f"<0 x {self.ncols} matrix>"
        cells = [[str(e) for e in r] for r in self.rows]
        width = [max(len(cells[i][j]) for i in range(self.nrows)) for j in range(self.ncols)]
        return "\n".join("[ " + "  ".join(c.rjust(w) for c, w in zip(r, width)) + " ]" for r in cells)

    def __repr__(self):
        return f"OpMatrix({self.nrows}x{self.ncols})"
