"""Left Gröbner bases of submodules of D^(1 x m).

Module monomials e_p d^mu are packed into one Python int so that integer
comparison is the term order and multiplication by d^nu is the addition of
a fixed offset.  Each field is 16 bits: 15 value bits and a guard bit used
by the divisibility test.  Exponents are stored as B - mu_i, so that a
smaller exponent of the last variable wins ties in degrevlex.

    TOP: [deg | var_{n-1} | ... | var_0 | pos]   (most significant first)
    POT: [pos | deg | var_{n-1} | ... | var_0]

The pos field holds m - 1 - p, so e_0 > e_1 > ...; the deg field holds
|mu| + w_p for per-position weights w (all zero unless a graded frame is
requested).

Basis rows are monic.  Leading terms live in the associated graded ring, so
lc(d^nu g) = lc(g) and the only change from the commutative algorithm is
that d^nu g picks up lower-order terms when g has x-dependent coefficients.
The product criterion is not used (it is unsound for modules and for Weyl
algebras); pairs are pruned with the Gebauer-Möller chain criteria only.
"""

from __future__ import annotations

import heapq
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .ops import DiffOp, OpMatrix, _sub_indices
from .scalars import ONE, ZERO, VarContext, diff, is_const

__all__ = [
    "Budget",
    "Frame",
    "GroebnerBasis",
    "MemberResult",
    "ModTermOrder",
    "ResourceBudgetExceeded",
    "buchberger",
    "default_degree_cap",
    "groebner_basis",
    "member",
    "module_equal",
    "reduce",
    "syzygy_rows",
]

_W = 16
_FMASK = (1 << _W) - 1
_B = (1 << (_W - 1)) - 1
_GUARD = 1 << (_W - 1)


class ResourceBudgetExceeded(RuntimeError):
    pass


def default_degree_cap() -> int:
    raw = os.environ.get("DOPALG_DEGREE_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return 12


@dataclass
class Budget:
    """Cooperative limits shared by every Gröbner call of one analysis."""

    degree_cap: int = field(default_factory=default_degree_cap)
    max_basis: int = 10_000
    max_steps: int | None = None
    timeout: float | None = None
    steps: int = 0
    max_degree_seen: int = 0
    _deadline: float | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.timeout is not None:
            self._deadline = time.monotonic() + self.timeout

    def tick(self) -> None:
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise ResourceBudgetExceeded(f"step budget of {self.max_steps} reductions exhausted")
        if self._deadline is not None and self.steps % 32 == 0 and time.monotonic() > self._deadline:
            raise ResourceBudgetExceeded(f"timeout of {self.timeout}s exceeded")

    def check_degree(self, d: int) -> None:
        if d > self.max_degree_seen:
            self.max_degree_seen = d
        if d > self.degree_cap:
            raise ResourceBudgetExceeded(f"derivative degree {d} exceeds the cap {self.degree_cap}")

    def check_size(self, s: int) -> None:
        if s > self.max_basis:
            raise ResourceBudgetExceeded(f"basis size {s} exceeds the cap {self.max_basis}")

    def usage(self) -> dict:
        return {
            "steps": self.steps,
            "max_degree": self.max_degree_seen,
            "degree_cap": self.degree_cap,
            "max_basis": self.max_basis,
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class ModTermOrder:
    kind: str = "TOP"

    def __post_init__(self):
        if self.kind not in ("TOP", "POT"):
            raise ValueError(f"unknown module order {self.kind!r}")


TOP = ModTermOrder("TOP")
POT = ModTermOrder("POT")


class Frame:
    """Packing of e_p d^mu for a free module of rank m over a context."""

    def __init__(self, ctx: VarContext, m: int, order: ModTermOrder = TOP, weights: Sequence[int] | None = None):
        n = ctx.n
        if m >= _FMASK:
            raise ValueError("too many positions")
        self.ctx = ctx
        self.n = n
        self.m = m
        self.order = order
        self.weights = tuple(int(w) for w in weights) if weights is not None else (0,) * m
        if len(self.weights) != m or any(w < 0 for w in self.weights):
            raise ValueError("weights must be m nonnegative integers")
        if order.kind == "TOP":
            self.s_pos = 0
            self.s_var = [_W * (1 + i) for i in range(n)]
            self.s_deg = _W * (n + 1)
        else:
            self.s_var = [_W * i for i in range(n)]
            self.s_deg = _W * n
            self.s_pos = _W * (n + 1)
        self.pmask = _FMASK << self.s_pos
        self.emask = sum((_GUARD - 1) << s for s in self.s_var)
        self.gmask = sum(_GUARD << s for s in self.s_var)
        self._base = sum(_B << s for s in self.s_var)
        self._zero = (0,) * n

    def encode(self, pos: int, mu: Sequence[int]) -> int:
        k = ((self.m - 1 - pos) << self.s_pos) + self._base + ((sum(mu) + self.weights[pos]) << self.s_deg)
        for e, s in zip(mu, self.s_var):
            k -= e << s
        return k

    def pos(self, key: int) -> int:
        return self.m - 1 - ((key >> self.s_pos) & _FMASK)

    def mu(self, key: int) -> tuple[int, ...]:
        return tuple(_B - ((key >> s) & _FMASK) for s in self.s_var)

    def decode(self, key: int) -> tuple[int, tuple[int, ...]]:
        return self.pos(key), self.mu(key)

    def degree(self, key: int) -> int:
        """Pure derivative degree |mu|."""
        return sum(self.mu(key))

    def wdegree(self, key: int) -> int:
        return (key >> self.s_deg) & _FMASK

    def offset(self, nu: Sequence[int]) -> int:
        off = sum(nu) << self.s_deg
        for e, s in zip(nu, self.s_var):
            off -= e << s
        return off

    def nu_between(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.mu(lo), self.mu(hi)))

    def divides(self, a: int, b: int) -> bool:
        if (a & self.pmask) != (b & self.pmask):
            return False
        return (((a & self.emask) | self.gmask) - (b & self.emask)) & self.gmask == self.gmask

    def lcm(self, a: int, b: int) -> int:
        p = self.pos(a)
        return self.encode(p, [max(x, y) for x, y in zip(self.mu(a), self.mu(b))])

    # -- rows -----------------------------------------------------------
    def row_from_ops(self, ops: Sequence[DiffOp]) -> dict:
        if len(ops) != self.m:
            raise ValueError(f"row of length {len(ops)} in a frame of rank {self.m}")
        row = {}
        for p, op in enumerate(ops):
            for mu, c in op.terms.items():
                row[self.encode(p, mu)] = c
        return row

    def ops_from_row(self, row: dict) -> list[DiffOp]:
        parts: list[dict] = [{} for _ in range(self.m)]
        for k, c in row.items():
            p, mu = self.decode(k)
            parts[p][mu] = c
        return [DiffOp._raw(self.ctx, t) for t in parts]

    def unit(self, p: int) -> dict:
        return {self.encode(p, self._zero): ONE}

    def row_wdegree(self, row: dict) -> int:
        return max((self.wdegree(k) for k in row), default=-1)

    def row_degree(self, row: dict) -> int:
        return max((self.degree(k) for k in row), default=-1)


def row_is_const(row: dict) -> bool:
    return all(is_const(c) or not c.depends_on_base() for c in row.values())


def _deriv(c, kappa):
    for i, k in enumerate(kappa):
        for _ in range(k):
            if is_const(c):
                return ZERO
            c = diff(c, i)
    return c


def mul_d(frame: Frame, row: dict, nu: Sequence[int], const: bool | None = None) -> dict:
    """d^nu * row with the Weyl rule."""
    if const is None:
        const = row_is_const(row)
    off = frame.offset(nu)
    if const:
        return {k + off: c for k, c in row.items()}
    out: dict = {}
    parts = list(_sub_indices(tuple(nu)))
    for k, c in row.items():
        if is_const(c) or not c.depends_on_base():
            kk = k + off
            out[kk] = out.get(kk, ZERO) + c
            continue
        for kappa, f in parts:
            dc = _deriv(c, kappa)
            if not dc:
                continue
            kk = k + frame.offset(tuple(v - q for v, q in zip(nu, kappa)))
            out[kk] = out.get(kk, ZERO) + dc * f
    return {k: c for k, c in out.items() if c}


def mul_op(frame: Frame, op_terms: dict, row: dict, const: bool | None = None) -> dict:
    """(sum_nu a_nu d^nu) * row."""
    if const is None:
        const = row_is_const(row)
    out: dict = {}
    for nu, a in op_terms.items():
        part = mul_d(frame, row, nu, const)
        for k, c in part.items():
            v = out.get(k)
            s = a * c if v is None else v + a * c
            if s:
                out[k] = s
            elif v is not None:
                del out[k]
    return out


def add_into(out: dict, row: dict, scale=ONE) -> None:
    for k, c in row.items():
        v = out.get(k)
        s = scale * c if v is None else v + scale * c
        if s:
            out[k] = s
        elif v is not None:
            del out[k]


def _recipe_add(recipe: dict, src: int, nu: tuple, c) -> None:
    t = recipe.setdefault(src, {})
    v = t.get(nu)
    s = c if v is None else v + c
    if s:
        t[nu] = s
    else:
        t.pop(nu, None)
        if not t:
            del recipe[src]


class GBState:
    """Incremental Buchberger with sugar selection and Gebauer-Möller pruning.

    Elements are never deleted, only deactivated, so recipes (how each
    element arises from the inputs) stay valid.  Input number i is referred
    to as source ``-(i + 1)`` in recipes.
    """

    def __init__(self, frame: Frame, budget: Budget | None = None, track: bool = False):
        self.frame = frame
        self.budget = budget if budget is not None else Budget()
        self.track = track
        self.inputs: list[dict] = []
        self.rows: list[dict] = []
        self.lms: list[int] = []
        self.consts: list[bool] = []
        self.sugar: list[int] = []
        self.recipes: list[dict | None] = []
        self.active: list[int] = []
        self.queue: list = []
        self._seq = 0
        self._prod_cache: dict = {}
        self._refresh()

    # -- bookkeeping ------------------------------------------------------
    def _refresh(self):
        self._a_lms = [self.lms[i] for i in self.active]
        self._a_rows = [self.rows[i] for i in self.active]
        self._a_consts = [self.consts[i] for i in self.active]
        self._a_poss = [self.lms[i] & self.frame.pmask for i in self.active]

    def _push(self, sugar: int, key: int, item) -> None:
        self._seq += 1
        heapq.heappush(self.queue, (sugar, key, self._seq, item))

    def _mulvar(self, ai: int, off: int) -> dict:
        i = self.active[ai]
        ck = (i, off)
        g = self._prod_cache.get(ck)
        if g is None:
            nu = self.frame.nu_between(self.lms[i], self.lms[i] + off)
            g = mul_d(self.frame, self.rows[i], nu, False)
            if len(self._prod_cache) > 20000:
                self._prod_cache.clear()
            self._prod_cache[ck] = g
        return g

    def _nf(self, row: dict, record, full: bool = True) -> dict:
        f = self.frame
        return kernels.nf(
            row, self._a_lms, self._a_rows, self._a_consts, self._a_poss,
            f.pmask, f.emask, f.gmask, self._mulvar, record, full,
        )

    def _record_to_recipe(self, record, recipe: dict) -> None:
        for ai, off, c in record:
            i = self.active[ai]
            nu = self.frame.nu_between(self.lms[i], self.lms[i] + off)
            _recipe_add(recipe, i, nu, -c)

    # -- public ---------------------------------------------------------
    def add_input(self, row: dict) -> int:
        idx = len(self.inputs)
        self.inputs.append(dict(row))
        if row:
            key = max(row)
            self._push(self.frame.row_wdegree(row), key, ("in", idx))
        return idx

    def complete(self, up_to: int | None = None) -> None:
        """Process the queue; with ``up_to`` stop before sugar > up_to."""
        f = self.frame
        zero_nu = (0,) * f.n
        while self.queue:
            if up_to is not None and self.queue[0][0] > up_to:
                return
            sugar, key, _, item = heapq.heappop(self.queue)
            self.budget.check_degree(f.degree(key))
            self.budget.tick()
            recipe: dict | None = {} if self.track else None
            if item[0] == "in":
                src = item[1]
                row = dict(self.inputs[src])
                if recipe is not None:
                    recipe[-(src + 1)] = {zero_nu: ONE}
            else:
                _, i, j = item
                a = f.nu_between(self.lms[i], key)
                b = f.nu_between(self.lms[j], key)
                row = mul_d(f, self.rows[i], a, self.consts[i])
                add_into(row, mul_d(f, self.rows[j], b, self.consts[j]), -ONE)
                if recipe is not None:
                    recipe[i] = {a: ONE}
                    _recipe_add(recipe, j, b, -ONE)
            record = [] if recipe is not None else None
            h = self._nf(row, record)
            if not h:
                continue
            if recipe is not None:
                self._record_to_recipe(record, recipe)
            self._insert(h, recipe, max(sugar, f.row_wdegree(h)))

    def _insert(self, h: dict, recipe: dict | None, sugar: int) -> int:
        f = self.frame
        lm = max(h)
        lc = h[lm]
        if lc != ONE:
            inv = ONE / lc
            h = {k: inv * c for k, c in h.items()}
            h[lm] = ONE
            if recipe is not None:
                recipe = {s: {nu: inv * c for nu, c in t.items()} for s, t in recipe.items()}
        hi = len(self.rows)
        self.budget.check_size(hi + 1)
        self.rows.append(h)
        self.lms.append(lm)
        self.consts.append(row_is_const(h))
        self.sugar.append(sugar)
        self.recipes.append(recipe)
        self._gm_update(hi)
        return hi

    def _gm_update(self, h: int) -> None:
        f = self.frame
        lmh = self.lms[h]
        ph = lmh & f.pmask
        cand = []
        for g in self.active:
            if (self.lms[g] & f.pmask) == ph:
                cand.append((f.lcm(lmh, self.lms[g]), g))
        # chain criterion among the new pairs; equal lcms are kept once
        kept = []
        for idx, (L, g) in enumerate(cand):
            redundant = False
            for L2, g2 in kept:
                if f.divides(L2, L):
                    redundant = True
                    break
            if not redundant:
                for L2, g2 in cand[idx + 1:]:
                    if L2 != L and f.divides(L2, L):
                        redundant = True
                        break
            if not redundant:
                kept.append((L, g))
        # prune old pairs that h makes redundant
        newq = []
        for ent in self.queue:
            item = ent[3]
            if item[0] == "pair":
                _, i, j = item
                L = ent[1]
                if f.divides(lmh, L):
                    if f.lcm(self.lms[i], lmh) != L and f.lcm(lmh, self.lms[j]) != L:
                        continue
            newq.append(ent)
        if len(newq) != len(self.queue):
            heapq.heapify(newq)
            self.queue = newq
        for L, g in kept:
            s = max(
                self.sugar[h] + f.wdegree(L) - f.wdegree(lmh),
                self.sugar[g] + f.wdegree(L) - f.wdegree(self.lms[g]),
            )
            self._push(s, L, ("pair", g, h))
        self.active = [g for g in self.active if not f.divides(lmh, self.lms[g])] + [h]
        self._refresh()

    def interreduce(self) -> None:
        """Make the active basis reduced (tails normal w.r.t. the others)."""
        if self.queue:
            raise RuntimeError("interreduce needs a completed basis")
        zero_nu = (0,) * self.frame.n
        current = list(self.active)
        for i in sorted(self.active, key=lambda i: self.lms[i]):
            self.active = [j for j in current if j != i]
            self._refresh()
            tail = dict(self.rows[i])
            del tail[self.lms[i]]
            record: list = []
            red = self._nf(tail, record) if tail else {}
            if record:
                red[self.lms[i]] = ONE
                recipe = None
                if self.track:
                    recipe = {i: {zero_nu: ONE}}
                    self._record_to_recipe(record, recipe)
                ni = len(self.rows)
                self.rows.append(red)
                self.lms.append(self.lms[i])
                self.consts.append(row_is_const(red))
                self.sugar.append(self.sugar[i])
                self.recipes.append(recipe)
                current = [ni if j == i else j for j in current]
        self.active = sorted(current, key=lambda i: -self.lms[i])
        self._refresh()
        self._prod_cache.clear()

    def reduce(self, row: dict, record=None, full: bool = True) -> dict:
        return self._nf(dict(row), record, full)

    def quotients(self, record) -> dict:
        """Turn a kernel record into {element: {nu: coeff}} (with + sign)."""
        q: dict = {}
        for ai, off, c in record:
            i = self.active[ai]
            nu = self.frame.nu_between(self.lms[i], self.lms[i] + off)
            _recipe_add(q, i, nu, c)
        return q


class _Lifter:
    """Expresses basis elements over the inputs, memoized."""

    def __init__(self, state: GBState, tframe: Frame):
        self.state = state
        self.tframe = tframe
        self.memo: dict[int, dict] = {}

    def of_source(self, src: int) -> dict:
        if src < 0:
            return self.tframe.unit(-src - 1)
        return self.element(src)

    def element(self, i: int) -> dict:
        got = self.memo.get(i)
        if got is not None:
            return got
        # iterative post-order to avoid deep recursion on long recipe chains
        stack = [i]
        while stack:
            j = stack[-1]
            if j in self.memo:
                stack.pop()
                continue
            recipe = self.state.recipes[j]
            if recipe is None:
                raise RuntimeError("basis was computed without tracking")
            pending = [s for s in recipe if s >= 0 and s not in self.memo]
            if pending:
                stack.extend(pending)
                continue
            out: dict = {}
            for src, op in recipe.items():
                add_into(out, mul_op(self.tframe, op, self.of_source(src)))
            self.memo[j] = out
            stack.pop()
        return self.memo[i]

    def combine(self, coeffs: dict) -> dict:
        out: dict = {}
        for src, op in coeffs.items():
            add_into(out, mul_op(self.tframe, op, self.of_source(src)))
        return out


class GroebnerBasis:
    """A completed, reduced left Gröbner basis with optional cofactor data."""

    def __init__(self, state: GBState, input_count: int):
        self.state = state
        self.frame = state.frame
        self.ctx = state.frame.ctx
        self.input_count = input_count
        self._lifter: _Lifter | None = None

    @property
    def order(self) -> ModTermOrder:
        return self.frame.order

    @property
    def tracked(self) -> bool:
        return self.state.track

    def rows(self) -> list[dict]:
        return [self.state.rows[i] for i in self.state.active]

    @property
    def gens(self) -> list[list[DiffOp]]:
        return [self.frame.ops_from_row(r) for r in self.rows()]

    def __len__(self):
        return len(self.state.active)

    def to_matrix(self) -> OpMatrix:
        return OpMatrix(self.ctx, self.gens, self.frame.m)

    def leading_keys(self) -> list[int]:
        return [self.state.lms[i] for i in self.state.active]

    def is_full(self) -> bool:
        """True when every unit row lies in the module."""
        have = set()
        for k in self.leading_keys():
            if self.frame.degree(k) == 0:
                have.add(self.frame.pos(k))
        return len(have) == self.frame.m

    def lifter(self, tframe: Frame | None = None) -> _Lifter:
        if tframe is not None:
            return _Lifter(self.state, tframe)
        if self._lifter is None:
            self._lifter = _Lifter(self.state, Frame(self.ctx, self.input_count))
        return self._lifter

    def reduce_row(self, row: dict) -> dict:
        return self.state.reduce(row)

    def cofactor_log(self) -> list[dict]:
        """Each basis row as a row over the inputs (requires tracking)."""
        lf = self.lifter()
        return [lf.element(i) for i in self.state.active]

    def s_vectors_reduce_to_zero(self) -> bool:
        st, f = self.state, self.frame
        act = st.active
        for a in range(len(act)):
            for b in range(a + 1, len(act)):
                i, j = act[a], act[b]
                if (st.lms[i] & f.pmask) != (st.lms[j] & f.pmask):
                    continue
                L = f.lcm(st.lms[i], st.lms[j])
                row = mul_d(f, st.rows[i], f.nu_between(st.lms[i], L), st.consts[i])
                add_into(row, mul_d(f, st.rows[j], f.nu_between(st.lms[j], L), st.consts[j]), -ONE)
                if st.reduce(row):
                    return False
        return True


def _as_rows(frame: Frame, gens) -> list[dict]:
    if isinstance(gens, OpMatrix):
        gens = gens.rows
    out = []
    for g in gens:
        out.append(g if isinstance(g, dict) else frame.row_from_ops(g))
    return out


def groebner_basis(
    gens,
    ncols: int | None = None,
    ctx: VarContext | None = None,
    order: ModTermOrder = TOP,
    weights: Sequence[int] | None = None,
    budget: Budget | None = None,
    track: bool = False,
    frame: Frame | None = None,
) -> GroebnerBasis:
    """Reduced left Gröbner basis of the module generated by ``gens``.

    ``gens`` is an :class:`OpMatrix`, or a list of rows (lists of
    :class:`DiffOp`, or packed dicts when ``frame`` is given).
    """
    if frame is None:
        if isinstance(gens, OpMatrix):
            ctx, ncols = gens.ctx, gens.ncols
        if ctx is None or ncols is None:
            raise ValueError("need a context and a column count")
        frame = Frame(ctx, ncols, order, weights)
    rows = _as_rows(frame, gens)
    st = GBState(frame, budget, track)
    for r in rows:
        st.add_input(r)
    st.complete()
    st.interreduce()
    return GroebnerBasis(st, len(rows))


def buchberger(gens, order: ModTermOrder = TOP, budget: Budget | None = None, **kw) -> GroebnerBasis:
    return groebner_basis(gens, order=order, budget=budget, **kw)


def _row_arg(G: GroebnerBasis, v) -> dict:
    if isinstance(v, dict):
        return v
    return G.frame.row_from_ops(list(v))


def reduce(v, G: GroebnerBasis) -> list[DiffOp]:
    """Normal form of the row v modulo the module of G."""
    return G.frame.ops_from_row(G.state.reduce(_row_arg(G, v)))


@dataclass
class MemberResult:
    is_member: bool
    cofactors: list[DiffOp] | None
    normal_form: list[DiffOp]

    def __bool__(self):
        return self.is_member


def member(v, G: GroebnerBasis) -> MemberResult:
    """Membership; with a tracked basis the cofactors over the inputs."""
    row = _row_arg(G, v)
    record = [] if G.tracked else None
    nf = G.state.reduce(row, record)
    if nf:
        return MemberResult(False, None, G.frame.ops_from_row(nf))
    cof = None
    if G.tracked:
        q = G.state.quotients(record)
        lf = G.lifter()
        combo = lf.combine(q)
        cof = lf.tframe.ops_from_row(combo)
    return MemberResult(True, cof, G.frame.ops_from_row({}))


def module_contains(A: OpMatrix, B: OpMatrix, budget: Budget | None = None, G: GroebnerBasis | None = None) -> bool:
    """row-module(B) is contained in row-module(A)."""
    if A.ncols != B.ncols:
        raise ValueError("column counts differ")
    if G is None:
        G = groebner_basis(A, budget=budget)
    for r in B.rows:
        if G.state.reduce(G.frame.row_from_ops(r)):
            return False
    return True


def module_equal(A: OpMatrix, B: OpMatrix, budget: Budget | None = None) -> bool:
    if A.ncols != B.ncols or A.ctx != B.ctx:
        raise ValueError("matrices live in different free modules")
    return module_contains(A, B, budget) and module_contains(B, A, budget)


def syzygy_rows(
    A: OpMatrix,
    weights: Sequence[int] | None = None,
    syz_weights: Sequence[int] | None = None,
    budget: Budget | None = None,
) -> tuple[Frame, list[dict]]:
    """A generating set (not minimized) of {L : L A = 0}, Schreyer style.

    Returns the frame of D^(1 x rows(A)) and packed rows in it.
    """
    ctx = A.ctx
    frame = Frame(ctx, A.ncols, TOP, weights)
    tframe = Frame(ctx, A.nrows, TOP, syz_weights)
    st = GBState(frame, budget, track=True)
    inputs = [frame.row_from_ops(r) for r in A.rows]
    for r in inputs:
        st.add_input(r)
    st.complete()
    st.interreduce()
    G = GroebnerBasis(st, len(inputs))
    lf = G.lifter(tframe)
    act = list(st.active)
    lms = st.lms
    out: list[dict] = []
    budget = st.budget
    for a in range(len(act)):
        for b in range(a + 1, len(act)):
            i, j = act[a], act[b]
            if (lms[i] & frame.pmask) != (lms[j] & frame.pmask):
                continue
            L = frame.lcm(lms[i], lms[j])
            skip = False
            for k in act:
                if k == i or k == j:
                    continue
                if frame.divides(lms[k], L) and frame.lcm(lms[i], lms[k]) != L and frame.lcm(lms[k], lms[j]) != L:
                    skip = True
                    break
            if skip:
                continue
            budget.tick()
            ai = frame.nu_between(lms[i], L)
            bj = frame.nu_between(lms[j], L)
            row = mul_d(frame, st.rows[i], ai, st.consts[i])
            add_into(row, mul_d(frame, st.rows[j], bj, st.consts[j]), -ONE)
            record: list = []
            rest = st.reduce(row, record)
            if rest:
                raise RuntimeError("internal error: S-vector of a Gröbner basis did not reduce to zero")
            coeffs: dict = {}
            _recipe_add(coeffs, i, ai, ONE)
            _recipe_add(coeffs, j, bj, -ONE)
            for src, t in st.quotients(record).items():
                for nu, c in t.items():
                    _recipe_add(coeffs, src, nu, -c)
            lifted = lf.combine(coeffs)
            if lifted:
                out.append(lifted)
    for idx, r in enumerate(inputs):
        record = []
        rest = st.reduce(r, record)
        if rest:
            raise RuntimeError("internal error: an input row is not in its own module")
        combo = lf.combine(st.quotients(record))
        add_into(combo, tframe.unit(idx), -ONE)
        if combo:
            out.append(combo)
    return tframe, out
