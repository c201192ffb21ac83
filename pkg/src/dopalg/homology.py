"""Compatibility conditions, resolutions, double duality and ext tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .groebner import (
    Budget,
    Frame,
    GBState,
    TOP,
    groebner_basis,
    module_contains,
    module_equal,
    mul_d,
    row_is_const,
    syzygy_rows,
)
from .linalg import kernel
from .ops import NEG_INF, DiffOp, OpMatrix
from .scalars import ONE

__all__ = [
    "DualityReport",
    "ExtReport",
    "NotTerminated",
    "Resolution",
    "TorsionElement",
    "cc",
    "duality_test",
    "euler_characteristic",
    "ext_zero",
    "left_invertible",
    "minimize",
    "resolve",
    "same_image",
    "torsion_annihilator",
    "verify_parametrization",
]


class NotTerminated(ValueError):
    pass


def row_weights(D: OpMatrix, col_weights: Sequence[int] | None = None) -> list[int]:
    """Shifted degree of every row: max over entries of order + column weight."""
    cw = col_weights if col_weights is not None else [0] * D.ncols
    out = []
    for r in D.rows:
        w = max((e.order() + c for e, c in zip(r, cw) if e.terms), default=0)
        out.append(int(w))
    return out


def _monic(frame: Frame, row: dict) -> dict:
    lc = row[max(row)]
    if lc == ONE:
        return row
    inv = ONE / lc
    return {k: inv * c for k, c in row.items()}


def _graded(frame: Frame, rows: list[dict]) -> bool:
    for r in rows:
        if not row_is_const(r):
            return False
        if len({frame.wdegree(k) for k in r}) > 1:
            return False
    return True


def minimize_rows(frame: Frame, rows: list[dict], budget: Budget | None = None) -> list[dict]:
    """Drop generators lying in the module of the others.

    Candidates are scanned by increasing degree against an incremental
    basis of the ones already kept.  For graded input this yields a minimal
    generating set (its size is the graded-minimal count); otherwise a final
    pass removes any remaining redundant generator.
    """
    budget = budget if budget is not None else Budget()
    cands = [_monic(frame, r) for r in rows if r]
    cands.sort(key=lambda r: (frame.row_wdegree(r), len(r), sorted(r, reverse=True)))
    graded = _graded(frame, cands)
    st = GBState(frame, budget)
    kept: list[dict] = []
    for r in cands:
        st.complete(frame.row_wdegree(r) if graded else None)
        if st.reduce(r):
            kept.append(r)
            st.add_input(r)
    if graded:
        return kept
    i = len(kept) - 1
    while i >= 0 and len(kept) > 1:
        others = kept[:i] + kept[i + 1:]
        G = groebner_basis(others, frame=frame, budget=budget)
        if not G.state.reduce(kept[i]):
            kept = others
        i -= 1
    return kept


def minimize(gens: OpMatrix, budget: Budget | None = None, weights: Sequence[int] | None = None) -> OpMatrix:
    frame = Frame(gens.ctx, gens.ncols, TOP, weights)
    rows = minimize_rows(frame, [frame.row_from_ops(r) for r in gens.rows], budget)
    return OpMatrix(gens.ctx, [frame.ops_from_row(r) for r in rows], gens.ncols)


def cc(D: OpMatrix, budget: Budget | None = None, col_weights: Sequence[int] | None = None) -> OpMatrix:
    """Minimized generators of the left syzygies of the rows of D."""
    budget = budget if budget is not None else Budget()
    rw = row_weights(D, col_weights)
    tframe, rows = syzygy_rows(D, col_weights, rw, budget)
    rows = minimize_rows(tframe, rows, budget)
    return OpMatrix(D.ctx, [tframe.ops_from_row(r) for r in rows], D.nrows)


# -- resolutions ---------------------------------------------------------


@dataclass
class Resolution:
    steps: list[OpMatrix]
    terminated: bool
    weights: list[list[int]] = field(default_factory=list)

    @property
    def unknowns(self) -> int:
        return self.steps[0].ncols

    @property
    def ranks(self) -> list[int]:
        r = [s.nrows for s in self.steps]
        return r + [0] if self.terminated else r

    @property
    def orders(self) -> list:
        return [s.order() for s in self.steps]

    def check_exact_composition(self) -> bool:
        return all((b @ a).is_zero() for a, b in zip(self.steps, self.steps[1:]))

    def table(self) -> list[dict]:
        return [
            {"rank": s.nrows, "order": None if s.order() == NEG_INF else int(s.order())}
            for s in self.steps
        ]


def resolve(D: OpMatrix, max_steps: int = 10, budget: Budget | None = None) -> Resolution:
    """Iterated minimized CC of D until no syzygies remain or max_steps."""
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    budget = budget if budget is not None else Budget()
    steps = [D]
    weights = [[0] * D.ncols]
    terminated = False
    for _ in range(max_steps):
        cur = steps[-1]
        rw = row_weights(cur, weights[-1])
        nxt = cc(cur, budget, weights[-1])
        if nxt.nrows == 0:
            terminated = True
            break
        steps.append(nxt)
        weights.append(rw)
    return Resolution(steps, terminated, weights)


def euler_characteristic(R: Resolution, leading_rank: int | None = None) -> int:
    if not R.terminated:
        raise NotTerminated("resolution was truncated before it terminated")
    lead = R.unknowns if leading_rank is None else leading_rank
    total = lead
    sign = -1
    for s in R.steps:
        total += sign * s.nrows
        sign = -sign
    return total


# -- torsion -------------------------------------------------------------


@dataclass
class TorsionElement:
    row: list[DiffOp]
    annihilator: DiffOp | None
    searched_to: int

    def describe(self) -> str:
        if self.annihilator is None:
            return f"annihilator not found <= degree {self.searched_to}"
        return str(self.annihilator)


def _multi_indices(n: int, k: int):
    for deg in range(k + 1):
        for mu in product(range(deg + 1), repeat=n):
            if sum(mu) == deg:
                yield mu


def torsion_annihilator(t: Sequence[DiffOp], D1: OpMatrix, max_order: int = 4, budget: Budget | None = None, G=None):
    """Lowest-order monic scalar operator a with a t in row-module(D1)."""
    G = G if G is not None else groebner_basis(D1, budget=budget)
    frame = G.frame
    trow = frame.row_from_ops(list(t))
    const = row_is_const(trow)
    ctx = D1.ctx
    for k in range(max_order + 1):
        mus = sorted(_multi_indices(ctx.n, k), key=lambda m: (sum(m), m))
        nfs = [G.state.reduce(mul_d(frame, trow, mu, const)) for mu in mus]
        keys = sorted({kk for r in nfs for kk in r})
        if not keys:
            # t itself is in the module
            return DiffOp.one(ctx), 0
        mat = [[r.get(kk, 0) for r in nfs] for kk in keys]
        ker = kernel(mat, len(mus))
        if not ker:
            continue
        # prefer the vector whose highest monomial is lowest
        best = min(ker, key=lambda v: max(i for i, c in enumerate(v) if c))
        top = max(i for i, c in enumerate(best) if c)
        inv = ONE / best[top]
        a = DiffOp(ctx, {mus[i]: inv * c for i, c in enumerate(best) if c})
        return a, k
    return None, max_order


# -- double duality ------------------------------------------------------


@dataclass
class DualityReport:
    D1: OpMatrix
    adD1: OpMatrix
    adD: OpMatrix
    D: OpMatrix
    D1p: OpMatrix
    parametrizable: bool
    torsion: list[TorsionElement]

    @property
    def verdict(self) -> str:
        return "parametrizable" if self.parametrizable else "not_parametrizable"

    @property
    def parametrization(self) -> OpMatrix | None:
        return self.D if self.parametrizable else None

    @property
    def torsion_rows(self) -> list[list[DiffOp]]:
        return [t.row for t in self.torsion]


def duality_test(D1: OpMatrix, budget: Budget | None = None, annihilator_order: int = 4) -> DualityReport:
    """ad, cc, ad, cc, compare."""
    budget = budget if budget is not None else Budget()
    adD1 = D1.adjoint()
    adD = cc(adD1, budget)
    D = adD.adjoint()
    if not (D1 @ D).is_zero():
        raise RuntimeError("internal error: D1 o D is not zero")
    D1p = cc(D, budget)
    if not (D1p @ D).is_zero():
        raise RuntimeError("internal error: D1' o D is not zero")
    G = groebner_basis(D1, budget=budget)
    frame = G.frame
    # classes of D1' rows modulo D1, keeping only those not generated by
    # D1 together with the classes already kept
    seen = GBState(frame, budget)
    for r in G.rows():
        seen.add_input(r)
    torsion = []
    for r in D1p.rows:
        rest = G.state.reduce(frame.row_from_ops(r))
        if not rest:
            continue
        seen.complete()
        if not seen.reduce(rest):
            continue
        seen.add_input(rest)
        row = frame.ops_from_row(_monic(frame, rest))
        a, k = torsion_annihilator(row, D1, annihilator_order, budget, G)
        torsion.append(TorsionElement(row, a, k))
    return DualityReport(D1, adD1, adD, D, D1p, not torsion, torsion)


def left_invertible(A: OpMatrix, budget: Budget | None = None) -> bool:
    """Every unit row of D^(1 x cols) lies in row-module(A)."""
    if A.ncols == 0:
        return True
    return groebner_basis(A, budget=budget).is_full()


def verify_parametrization(D1: OpMatrix, D: OpMatrix, budget: Budget | None = None) -> dict:
    if D1.ncols != D.nrows:
        raise ValueError("cols(D1) must equal rows(D)")
    composes = (D1 @ D).is_zero()
    gen = composes and module_equal(cc(D, budget), D1, budget)
    return {"composes_to_zero": composes, "generates_all_cc": gen}


def same_image(A: OpMatrix, B: OpMatrix, budget: Budget | None = None) -> bool:
    """Parametrizations with module-equal adjoint rows."""
    return module_equal(A.adjoint(), B.adjoint(), budget)


# -- ext -----------------------------------------------------------------


@dataclass
class ExtReport:
    i: int
    is_zero: bool
    witness: list[DiffOp] | None
    kernel: OpMatrix
    image: OpMatrix

    def verify(self, budget: Budget | None = None) -> bool:
        """The witness is in the kernel and outside the image."""
        if self.witness is None:
            return self.is_zero
        w = OpMatrix(self.kernel.ctx, [self.witness], self.kernel.ncols)
        in_kernel = module_contains(self.kernel, w, budget)
        outside = not module_contains(self.image, w, budget) if self.image.nrows else True
        return in_kernel and outside


def ext_from_chain(chain: Sequence[OpMatrix], i: int, budget: Budget | None = None) -> ExtReport:
    """ext^i from d_1, d_2, ... (d_{k+1} d_k = 0) via the adjoint complex."""
    if i < 1 or i > len(chain):
        raise ValueError(f"ext^{i} needs d_{i} in the chain")
    budget = budget if budget is not None else Budget()
    ctx = chain[0].ctx
    image = chain[i - 1].adjoint()
    r_i = image.ncols
    if i < len(chain):
        kern = cc(chain[i].adjoint(), budget)
    else:
        kern = OpMatrix.identity(ctx, r_i)
    if image.nrows:
        G = groebner_basis(image, budget=budget)
        for r in kern.rows:
            if G.state.reduce(G.frame.row_from_ops(r)):
                return ExtReport(i, False, list(r), kern, image)
        return ExtReport(i, True, None, kern, image)
    for r in kern.rows:
        return ExtReport(i, False, list(r), kern, image)
    return ExtReport(i, True, None, kern, image)


def ext_zero(D: OpMatrix, i: int, max_steps: int = 10, budget: Budget | None = None, resolution: Resolution | None = None) -> ExtReport:
    budget = budget if budget is not None else Budget()
    if resolution is None:
        resolution = resolve(D, max(i, 1) + 1, budget)
    chain = resolution.steps
    if i > len(chain):
        if resolution.terminated:
            # past the end of a finite resolution the dual complex is zero
            ctx = D.ctx
            z = OpMatrix(ctx, [], 0)
            return ExtReport(i, True, None, z, z)
        raise ValueError(f"resolution too short for ext^{i}")
    if i == len(chain) and not resolution.terminated:
        raise ValueError(f"resolution too short for ext^{i}")
    return ext_from_chain(chain, i, budget)
