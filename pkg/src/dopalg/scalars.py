"""Exact coefficient field K = Q(params)(x1, ..., xn).

Polynomials are sympy sparse ring elements over QQ (gmpy2 rationals) in the
variables ``base_vars + params`` with graded-lex order.  A non-constant
coefficient is a :class:`RationalFunction`; constants are always plain
:class:`gmpy2.mpq`, so the two representations never overlap and equality of
coefficients is equality of stored data.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

__all__ = [
    "Coeff",
    "DivisionByZero",
    "Poly",
    "RationalFunction",
    "ScalarError",
    "UnknownVariable",
    "VarContext",
    "arith",
    "coerce",
    "diff",
    "is_const",
    "is_zero",
]

Poly = PolyElement

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
ZERO = mpq(0)
ONE = mpq(1)


class ScalarError(ValueError):
    pass


class DivisionByZero(ZeroDivisionError, ScalarError):
    pass


class UnknownVariable(ScalarError):
    pass


@lru_cache(maxsize=None)
def _ring(symbols: tuple[str, ...]) -> PolyRing:
    return PolyRing(symbols, QQ, grlex)


def _q(c) -> mpq:
    if type(c) is mpq:
        return c
    if isinstance(c, (int, Fraction)):
        return mpq(c)
    return mpq(int(c.numerator), int(c.denominator))


@dataclass(frozen=True)
class VarContext:
    """Differentiation variables plus symbolic constants."""

    base_vars: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        object.__setattr__(self, "params", tuple(self.params))
        if not self.base_vars:
            raise ScalarError("a context needs at least one base variable")
        names = self.base_vars + self.params
        if len(set(names)) != len(names):
            raise ScalarError(f"duplicate variable names in {names}")
        for name in names:
            if not _IDENT.match(name):
                raise ScalarError(f"invalid variable name {name!r}")

    @property
    def n(self) -> int:
        return len(self.base_vars)

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.base_vars + self.params

    @property
    def ring(self) -> PolyRing:
        return _ring(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self.base_vars.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a base variable of {self.base_vars}") from None

    def var(self, name: str) -> "RationalFunction":
        try:
            i = self.symbols.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown symbol {name!r}") from None
        return RationalFunction(self.ring.gens[i], self.ring.one, self)

    def poly(self, value) -> "Coeff":
        """Wrap a ring element (or rational) as a normalized coefficient."""
        if isinstance(value, PolyElement):
            return RationalFunction.make(value, self.ring.one, self)
        return coerce(value)

    def with_params(self, params) -> "VarContext":
        return VarContext(self.base_vars, tuple(params))


Coeff = Union[mpq, "RationalFunction"]


def coerce(value) -> Coeff:
    if isinstance(value, RationalFunction):
        return value
    return _q(value)


def is_const(a) -> bool:
    return not isinstance(a, RationalFunction)


def is_zero(a) -> bool:
    """True iff ``a`` is the zero element (exact)."""
    return is_const(a) and a == 0


def _poly_const(p: PolyElement):
    """Return the rational value of a ground polynomial, else None."""
    if not p:
        return ZERO
    if p.is_ground:
        return _q(p.LC)
    return None


# Denominators repeat constantly, so each one is factored once and the
# factorization is reused: cancellation becomes trial division by known
# irreducibles, and sums and products only test the factors that can cancel.
_FACTORS: dict = {}
_FACTORS_MAX = 100_000


def _fac(den: PolyElement) -> dict:
    key = (den.ring, den)
    f = _FACTORS.get(key)
    if f is None:
        f = {q.monic(): k for q, k in den.factor_list()[1]}
        _remember(den, f)
    return f


def _remember(den: PolyElement, f: dict) -> None:
    if len(_FACTORS) >= _FACTORS_MAX:
        _FACTORS.clear()
    _FACTORS[(den.ring, den)] = f


def _strip(num: PolyElement, p: PolyElement, k: int) -> tuple[PolyElement, int]:
    """Divide num by p at most k times."""
    j = 0
    while j < k:
        q, r = num.div(p)
        if r:
            break
        num = q
        j += 1
    return num, j


def _expand(ring: PolyRing, f: dict) -> PolyElement:
    out = ring.one
    for p, k in f.items():
        if k:
            out = out * p**k
    return out


def _from_factored(num: PolyElement, f: dict, ctx: "VarContext") -> "Coeff":
    """num / prod p^k, already reduced; monic factors make the product monic."""
    f = {p: k for p, k in f.items() if k}
    if not f:
        c = _poly_const(num)
        if c is not None:
            return c
        return RationalFunction(num, ctx.ring.one, ctx)
    den = _expand(num.ring, f)
    _remember(den, f)
    return RationalFunction(num, den, ctx)


def _cancel(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    f = dict(_fac(den))
    changed = False
    for p, k in list(f.items()):
        num, j = _strip(num, p, k)
        if j:
            f[p] = k - j
            changed = True
    if changed:
        den = den.exquo(_expand(den.ring, {p: k - f[p] for p, k in _fac(den).items()}))
    return num, den


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic under grlex.

    Instances are never constant; use :meth:`make` to get a normalized
    coefficient, which falls back to ``mpq`` for constants.
    """

    __slots__ = ("num", "den", "ctx")

    def __init__(self, num: PolyElement, den: PolyElement, ctx: VarContext):
        self.num = num
        self.den = den
        self.ctx = ctx

    @classmethod
    def make(cls, num: PolyElement, den: PolyElement, ctx: VarContext, reduced: bool = False) -> Coeff:
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return ZERO
        if not reduced and not den.is_ground:
            num, den = _cancel(num, den)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        if den.is_ground:
            c = _poly_const(num)
            if c is not None:
                return c
        return cls(num, den, ctx)

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.ctx != self.ctx:
                raise ScalarError("coefficients from different contexts")
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        ctx = self.ctx
        if o is None:
            c = _q(other)
            if not c:
                return self
            # gcd(a + c b, b) = gcd(a, b) = 1
            return RationalFunction.make(self.num + self.den * c, self.den, ctx, reduced=True)
        if self.den == o.den:
            if self.den.is_ground:
                return RationalFunction.make(self.num + o.num, self.den, ctx, reduced=True)
            return RationalFunction.make(self.num + o.num, self.den, ctx)
        if o.den.is_ground:
            return RationalFunction.make(self.num + o.num * self.den, self.den, ctx, reduced=True)
        if self.den.is_ground:
            return RationalFunction.make(self.num * o.den + o.num, o.den, ctx, reduced=True)
        # only factors shared by both denominators can cancel
        f1, f2 = _fac(self.den), _fac(o.den)
        common = {p: min(k, f2[p]) for p, k in f1.items() if p in f2}
        ring = self.num.ring
        a = _expand(ring, {p: k - common.get(p, 0) for p, k in f1.items()})
        b = _expand(ring, {p: k - common.get(p, 0) for p, k in f2.items()})
        num = self.num * b + o.num * a
        if not num:
            return ZERO
        f = dict(f1)
        for p, k in f2.items():
            f[p] = max(f.get(p, 0), k)
        for p, g in common.items():
            num, j = _strip(num, p, g)
            f[p] -= j
        return _from_factored(num, f, ctx)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.ctx)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        ctx = self.ctx
        if o is None:
            c = _q(other)
            if not c:
                return ZERO
            return RationalFunction(self.num * c, self.den, ctx)
        if self.den.is_ground and o.den.is_ground:
            return RationalFunction.make(self.num * o.num, self.den, ctx, reduced=True)
        # cross-cancel each numerator against the other denominator
        n1, n2 = self.num, o.num
        f1 = dict(_fac(self.den)) if not self.den.is_ground else {}
        f2 = dict(_fac(o.den)) if not o.den.is_ground else {}
        for p, k in list(f2.items()):
            n1, j = _strip(n1, p, k)
            f2[p] = k - j
        for p, k in list(f1.items()):
            n2, j = _strip(n2, p, k)
            f1[p] = k - j
        for p, k in f2.items():
            f1[p] = f1.get(p, 0) + k
        return _from_factored(n1 * n2, f1, ctx)

    __rmul__ = __mul__

    def inverse(self) -> Coeff:
        return RationalFunction.make(self.den, self.num, self.ctx, reduced=True)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            c = _q(other)
            if not c:
                raise DivisionByZero("division by zero")
            return RationalFunction(self.num.quo_ground(c), self.den, self.ctx)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        # powers of a reduced fraction stay reduced
        return RationalFunction.make(base.num ** abs(k), base.den ** abs(k), self.ctx, reduced=True)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return False
        return self.ctx == other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def __bool__(self):
        return True

    # -- calculus -----------------------------------------------------
    def diff(self, i: int) -> Coeff:
        """Partial derivative with respect to base variable number ``i``."""
        x = self.ctx.ring.gens[i]
        if self.den.is_ground:
            return RationalFunction.make(self.num.diff(x), self.den, self.ctx, reduced=True)
        dd = self.den.diff(x)
        if not dd:
            return RationalFunction.make(self.num.diff(x), self.den, self.ctx)
        # (n/d)' = (n' - n d'/d) / d with d'/d = sum k p'/p over the factors
        # that involve x; the result over d * prod p is already reduced there
        f = _fac(self.den)
        dep = {p: p.diff(x) for p in f if p.diff(x)}
        P = _expand(self.num.ring, {p: 1 for p in dep})
        acc = self.num.ring.zero
        for p, dp in dep.items():
            acc += f[p] * dp * P.exquo(p)
        num = self.num.diff(x) * P - self.num * acc
        if not num:
            return ZERO
        out = dict(f)
        for p in dep:
            out[p] += 1
        for p, k in f.items():
            if p not in dep:
                num, j = _strip(num, p, k)
                out[p] -= j
        return _from_factored(num, out, self.ctx)

    def depends_on_base(self) -> bool:
        n = self.ctx.n
        return any(any(m[:n]) for m in self.num.keys()) or any(any(m[:n]) for m in self.den.keys())

    def substitute(self, target: VarContext, values: Mapping[str, Coeff]) -> Coeff:
        """Evaluate in ``target`` after replacing the symbols in ``values``."""
        return _eval_poly(self.num, self.ctx, target, values) / _eval_poly(self.den, self.ctx, target, values)

    def __repr__(self):
        return f"RationalFunction({format_coeff(self)!r})"

    def __str__(self):
        return format_coeff(self)


def _eval_poly(p: PolyElement, src: VarContext, target: VarContext, values) -> Coeff:
    gens = []
    for name in src.symbols:
        if name in values:
            gens.append(coerce(values[name]))
        else:
            gens.append(target.var(name))
    total = ZERO
    for monom, c in p.terms():
        term = _q(c)
        for g, e in zip(gens, monom):
            for _ in range(e):
                term = term * g
        total = total + term
    return total


def substitute(a: Coeff, target: VarContext, values: Mapping[str, Coeff]) -> Coeff:
    if is_const(a):
        return a
    return a.substitute(target, values)


def diff(a: Coeff, i: int) -> Coeff:
    if is_const(a):
        return ZERO
    return a.diff(i)


def diff_var(a: Coeff, ctx: VarContext, name: str) -> Coeff:
    """Derivative by variable name; parameters are rejected."""
    return diff(a, ctx.index(name))


def arith(a: Coeff, b: Coeff, kind: str) -> Coeff:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if is_zero(b):
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


# -- formatting ---------------------------------------------------------


def _format_poly(p: PolyElement, symbols) -> str:
    if not p:
        return "0"
    out = []
    for monom, c in p.terms():
        c = _q(c)
        factors = [f"{s}^{e}" if e > 1 else s for s, e in zip(symbols, monom) if e]
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{mag}*{body}"
        else:
            body = str(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def format_coeff(a: Coeff) -> str:
    """Render a coefficient in the DSL's coefficient syntax."""
    if is_const(a):
        return str(a)
    syms = a.ctx.symbols
    num = _format_poly(a.num, syms)
    if a.den == a.ctx.ring.one:
        return num
    if len(a.num) > 1:
        num = f"({num})"
    return f"{num}/({_format_poly(a.den, syms)})"
