"""The acceptance suite as plain functions.

Each ``criterion_k`` returns a :class:`CriterionResult`; ``run_all`` runs
them in index order.  The CLI's ``check-all`` and tests/test_acceptance.py
both sit on top of this module.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .catalog import (
    CATALOG,
    MetricSpec,
    airy,
    beltrami,
    build,
    cauchy,
    conformal_killing,
    double_pendulum,
    einstein,
    killing,
    pairing_weights,
    pendulum_parametrization,
    ricci,
    riemann,
    trace_flip,
    vessiot,
)
from .groebner import Budget, ResourceBudgetExceeded, module_equal
from .homology import (
    cc,
    duality_test,
    euler_characteristic,
    ext_zero,
    left_invertible,
    resolve,
    same_image,
    verify_parametrization,
)
from .ops import DiffOp, OpMatrix
from .scalars import ONE, VarContext, mpq
from .spencer import conformal_symbol, delta_complex, killing_symbol, lanczos_space, prolong

__all__ = ["CRITERIA", "CriterionResult", "run_all", "run_one"]


@dataclass
class CriterionResult:
    index: int
    title: str
    passed: bool
    seconds: float
    limit: float
    checks: dict = field(default_factory=dict)
    status: str = ""
    error: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        extra = f" ({self.error})" if self.error else ""
        return f"[{self.status}] {self.index:2d}. {self.title}  {self.seconds:.2f}s / {self.limit:g}s{extra}"

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "title": self.title,
            "status": self.status,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
            "checks": self.checks,
            "error": self.error,
        }


def _budget(factory) -> Budget:
    return factory() if factory is not None else Budget()


# -- 1. adjoint ------------------------------------------------------------


def _random_coeff(rng: random.Random, ctx: VarContext):
    kind = rng.random()
    if kind < 0.3:
        return mpq(rng.randint(-5, 5), rng.randint(1, 4))
    num = mpq(rng.randint(-3, 3))
    for _ in range(rng.randint(1, 3)):
        mono = mpq(rng.randint(-4, 4))
        for _ in range(rng.randint(0, 2)):
            mono = mono * ctx.var(rng.choice(ctx.base_vars))
        num = num + mono
    if kind > 0.85:
        # a rational coefficient with a denominator that never vanishes identically
        v = ctx.var(rng.choice(ctx.base_vars))
        den = ONE + v * v
        return num / den
    return num


def _random_op(rng: random.Random, ctx: VarContext, max_order: int = 3) -> DiffOp:
    terms: dict = {}
    for _ in range(rng.randint(0, 4)):
        k = rng.randint(0, max_order)
        mu = [0] * ctx.n
        for _ in range(k):
            mu[rng.randrange(ctx.n)] += 1
        terms[tuple(mu)] = _random_coeff(rng, ctx)
    out = DiffOp.zero(ctx)
    for mu, c in terms.items():
        out = out + DiffOp(ctx, {mu: c})
    return out


def _random_matrix(rng, ctx, r, c, max_order=3) -> OpMatrix:
    return OpMatrix(ctx, [[_random_op(rng, ctx, max_order) for _ in range(c)] for _ in range(r)], c)


def criterion_1(budget_factory=None, samples: int = 500, seed: int = 7) -> dict:
    rng = random.Random(seed)
    inv = anti = 0
    for t in range(samples):
        n = rng.randint(1, 3)
        ctx = VarContext(tuple(f"x{i + 1}" for i in range(n)))
        if t % 2 == 0:
            A = _random_matrix(rng, ctx, 1, 1)
            B = _random_matrix(rng, ctx, 1, 1)
        else:
            p, q, s = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
            A = _random_matrix(rng, ctx, p, q, 2)
            B = _random_matrix(rng, ctx, q, s, 2)
        inv += A.adjoint().adjoint() == A
        anti += (A @ B).adjoint() == B.adjoint() @ A.adjoint()
    return {"samples": samples, "involution_ok": inv, "antihomomorphism_ok": anti,
            "_ok": inv == samples and anti == samples}


# -- 2, 3. resolutions -------------------------------------------------------

KILLING_TABLE = {
    2: ([3, 1, 0], [1, 2]),
    3: ([6, 6, 3, 0], [1, 2, 1]),
    4: ([10, 20, 20, 6, 0], [1, 2, 1, 1]),
}

CONFORMAL_TABLE = {
    3: ([5, 5, 3, 0], [1, 3, 1]),
    4: ([9, 10, 9, 4, 0], [1, 2, 2, 1]),
    5: ([14, 35, 35, 14, 5, 0], [1, 2, 1, 2, 1]),
}


def _chain_checks(sd, expect, budget) -> dict:
    R = resolve(sd.matrix, 10, budget)
    ranks, orders = expect
    got_orders = [int(o) for o in R.orders]
    chi = euler_characteristic(R)
    return {
        "ranks": R.ranks,
        "orders": got_orders,
        "euler": chi,
        "exact": R.check_exact_composition(),
        "_ok": R.ranks == ranks and got_orders == orders and chi == 0 and R.check_exact_composition(),
    }


def criterion_2(budget_factory=None) -> dict:
    out = {}
    ok = True
    for n in (2, 3, 4):
        t0 = time.perf_counter()
        c = _chain_checks(killing(n), KILLING_TABLE[n], _budget(budget_factory))
        c["seconds"] = round(time.perf_counter() - t0, 3)
        ok = ok and c.pop("_ok") and c["seconds"] < 60
        out[f"n={n}"] = c
    out["_ok"] = ok
    return out


def criterion_3(budget_factory=None, skip_long: bool = False) -> dict:
    out = {}
    ok = True
    for n in (3, 4, 5):
        if n == 5 and skip_long:
            out["n=5"] = "skipped (long-running)"
            continue
        t0 = time.perf_counter()
        c = _chain_checks(conformal_killing(n), CONFORMAL_TABLE[n], _budget(budget_factory))
        c["seconds"] = round(time.perf_counter() - t0, 3)
        ok = ok and c.pop("_ok") and c["seconds"] < (1800 if n == 5 else 300)
        out[f"n={n}"] = c
    out["_ok"] = ok
    return out


# -- 4. elasticity -----------------------------------------------------------


def criterion_4(budget_factory=None) -> dict:
    b = _budget(budget_factory)
    out = {}
    for n in (2, 3, 4):
        K = killing(n).matrix
        W = pairing_weights(n)
        out[f"ad_killing_is_cauchy_n{n}"] = module_equal(
            K.weight_rescale(W, [1] * n).adjoint(), cauchy(n).matrix, b)
    r2 = duality_test(cauchy(2).matrix, b)
    out["cauchy2_parametrizable"] = r2.parametrizable
    out["cauchy2_airy"] = r2.parametrizable and same_image(r2.D, airy().matrix, b)
    W2 = pairing_weights(2)
    out["airy_is_weighted_ad_riemann2"] = (
        riemann(2).matrix.adjoint().weight_rescale([ONE / w for w in W2], [1]) == airy().matrix)
    r3 = duality_test(cauchy(3).matrix, b)
    W3 = pairing_weights(3)
    beltrami_target = riemann(3).matrix.adjoint().weight_rescale([ONE / w for w in W3], [1] * 6)
    out["cauchy3_parametrizable"] = r3.parametrizable
    out["cauchy3_potentials"] = r3.D.ncols
    out["cauchy3_matches_ad_riemann3"] = r3.parametrizable and same_image(r3.D, beltrami_target, b)
    Bw = beltrami(True).matrix
    out["beltrami_weighted_self_adjoint"] = Bw.adjoint() == Bw
    out["_ok"] = all(v for k, v in out.items() if k != "cauchy3_potentials") and out["cauchy3_potentials"] == 6
    return out


# -- 5. Einstein ---------------------------------------------------------------


def criterion_5(budget_factory=None) -> dict:
    b = _budget(budget_factory)
    m = MetricSpec(4)
    E = einstein(m).matrix
    C = trace_flip(m).matrix
    R = ricci(m).matrix
    W = pairing_weights(m)
    WE = E.weight_rescale(W, [1] * E.ncols)
    out = {"self_adjoint_weighted": WE.adjoint() == WE, "E_equals_C_R": E == C @ R,
           "C_involution": (C @ C) == OpMatrix.identity(m.ctx, C.nrows)}
    rep = duality_test(E, b)
    out["verdict"] = rep.verdict
    out["d1prime_rows"] = rep.D1p.nrows
    out["d1prime_is_riemann"] = module_equal(rep.D1p, riemann(m).matrix, b)
    X = E @ C
    out["X_times_C_is_E"] = (X @ C) == E
    out["ad_X_is_ricci"] = module_equal(X.weight_rescale(W, [1] * X.ncols).adjoint(), R, b)
    out["_ok"] = (out["self_adjoint_weighted"] and out["E_equals_C_R"] and out["C_involution"]
                  and rep.verdict == "not_parametrizable" and rep.D1p.nrows == 20
                  and out["d1prime_is_riemann"] and out["X_times_C_is_E"] and out["ad_X_is_ricci"])
    return out


# -- 6. pendulum ---------------------------------------------------------------


def criterion_6(budget_factory=None) -> dict:
    b = _budget(budget_factory)
    sd = double_pendulum(False)
    rep = duality_test(sd.matrix, b)
    phi = pendulum_parametrization()
    vp = verify_parametrization(sd.matrix, phi, b)
    out = {
        "generic_verdict": rep.verdict,
        "phi_composes_to_zero": vp["composes_to_zero"],
        "phi_generates_all_cc": vp["generates_all_cc"],
        "phi_same_image_as_computed": same_image(phi, rep.D, b),
        "adjoint_left_invertible": left_invertible(sd.matrix.adjoint(), b),
    }
    eq = double_pendulum(True)
    rep2 = duality_test(eq.matrix, b, annihilator_order=2)
    ctx = eq.context
    target = DiffOp.d(ctx, 0, 0, coeff=ctx.var("l")) + DiffOp.const(ctx, ctx.var("g"))
    found = [t for t in rep2.torsion if t.annihilator is not None]
    out["equal_verdict"] = rep2.verdict
    out["torsion_rows"] = [[str(e) for e in t.row] for t in rep2.torsion]
    out["annihilators"] = [t.describe() for t in rep2.torsion]
    out["annihilator_is_l_d2_plus_g"] = any(
        t.annihilator.scale(ctx.var("l")) == target for t in found)
    out["_ok"] = (rep.parametrizable and vp["composes_to_zero"] and vp["generates_all_cc"]
                  and out["phi_same_image_as_computed"] and out["adjoint_left_invertible"]
                  and not rep2.parametrizable and out["annihilator_is_l_d2_plus_g"])
    return out


# -- 7. Vessiot ------------------------------------------------------------------


def criterion_7(budget_factory=None) -> dict:
    b = _budget(budget_factory)
    sd = vessiot("c")
    ctx = sd.context
    L = cc(sd.matrix, b)
    c = ctx.var("c")
    expect = OpMatrix(ctx, [[DiffOp.d(ctx, 1, coeff=-ONE), DiffOp.d(ctx, 0), DiffOp.const(ctx, -c)]], 3)
    out = {"cc_rows": L.nrows, "cc": [str(e) for e in L.rows[0]] if L.nrows else []}
    out["cc_matches"] = L.nrows == 1 and module_equal(L, expect, b)
    ok = out["cc_matches"]
    for cv in (1, 0):
        s = vessiot(cv)
        D1 = s.matrix
        R = resolve(D1, 4, b)
        # the injectivity check is on the adjoint of the CC operator of these rows
        li = left_invertible(cc(D1, b).adjoint(), b)
        e1 = ext_zero(D1, 1, budget=b, resolution=R)
        e2 = ext_zero(D1, 2, budget=b, resolution=R)
        out[f"c={cv}"] = {
            "left_invertible_adjoint": li,
            "ext1_zero": e1.is_zero,
            "ext1_witness": [str(e) for e in e1.witness] if e1.witness else None,
            "ext1_witness_verified": e1.verify(b),
            "ext2_zero": e2.is_zero,
            "ext2_witness": [str(e) for e in e2.witness] if e2.witness else None,
            "ext2_verified": e2.verify(b),
        }
        ok = ok and li == (cv != 0) and not e1.is_zero and e1.verify(b) and e2.verify(b)
        ok = ok and e2.is_zero == (cv != 0)
    out["_ok"] = ok
    return out


# -- 8. Spencer ------------------------------------------------------------------


def criterion_8(budget_factory=None) -> dict:
    out = {}
    ok = True
    for n in (2, 3, 4, 5):
        rep = delta_complex(killing_symbol(n), min(n, 3))
        h2, h3 = rep.cohomology[2], rep.cohomology.get(3, 0)
        e2 = n * n * (n * n - 1) // 12
        e3 = n * n * (n * n - 1) * (n - 2) // 24
        g2 = rep.prolongation_dims[2]
        out[f"n={n}"] = {"H2": h2, "H3": h3, "g2": g2, "delta_squared_zero": rep.delta_squared_zero}
        ok = ok and h2 == e2 and h3 == e3 and g2 == 0 and rep.delta_squared_zero
    lan, _ = lanczos_space(4)
    h3 = out["n=4"]["H3"]
    seq = [0, h3, 24, 4, 0]
    out["lanczos_dim"] = lan
    out["sequence"] = seq
    out["sequence_alternating_sum"] = h3 - 24 + 4
    ok = ok and lan == 20 and h3 - 24 + 4 == 0
    for n in (3, 4, 5):
        rep = delta_complex(conformal_symbol(n), 1)
        pd = rep.prolongation_dims
        g3 = prolong(prolong(prolong(conformal_symbol(n)))).dim
        out[f"conformal n={n}"] = {"g1": pd[1], "g2": pd[2], "g3": g3}
        ok = ok and pd[2] == n and g3 == 0
    out["_ok"] = ok
    return out


# -- 9. oracle -------------------------------------------------------------------


def _oracle_cases(budget, skip_long: bool):
    for n in (2, 3, 4):
        R = resolve(killing(n).matrix, 10, budget)
        for k, (D, L, w) in enumerate(zip(R.steps, R.steps[1:], R.weights)):
            yield f"killing n={n} step {k + 1}", D, L, w
    for n in (3, 4, 5):
        if n == 5 and skip_long:
            continue
        R = resolve(conformal_killing(n).matrix, 10, budget)
        for k, (D, L, w) in enumerate(zip(R.steps, R.steps[1:], R.weights)):
            yield f"conformal n={n} step {k + 1}", D, L, w
    for name, sd in (("cauchy n=2", cauchy(2)), ("cauchy n=3", cauchy(3)), ("einstein n=4", einstein(4))):
        rep = duality_test(sd.matrix, budget)
        yield f"{name} cc(ad D1)", rep.adD1, rep.adD, None
        yield f"{name} cc(D)", rep.D, rep.D1p, None


def criterion_9(budget_factory=None, skip_long: bool = False) -> dict:
    from .oracle import check_cc

    b = _budget(budget_factory)
    out = {}
    ok = True
    for label, D, L, w in _oracle_cases(b, skip_long):
        rep = check_cc(D, L, w)
        out[label] = {"degrees": rep.degrees, "brute_force": rep.brute, "generated": rep.generated}
        ok = ok and rep.agree
    out["_ok"] = ok
    return out


# -- 10. DSL robustness --------------------------------------------------------------


def criterion_10(budget_factory=None, samples: int = 10_000, seed: int = 11) -> dict:
    from .fuzz import fuzz_parser
    from .sysdsl import parse_one, to_dsl

    stats = fuzz_parser(samples, seed)
    trips = {}
    for name in sorted(CATALOG):
        kw = {"n": 3} if name in _NEEDS_N else {}
        sd = build(name, **kw)
        back = parse_one(to_dsl(sd))
        trips[name] = back.matrix == sd.matrix and back.unknowns == sd.unknowns
    for n in (2, 4):
        for name in ("killing", "riemann", "einstein"):
            sd = build(name, n=n)
            trips[f"{name} n={n}"] = parse_one(to_dsl(sd)).matrix == sd.matrix
    return {"fuzz": stats, "round_trip": trips,
            "_ok": stats["crashes"] == 0 and all(trips.values())}


_NEEDS_N = {"killing", "conformal_killing", "riemann", "bianchi", "ricci", "einstein", "trace_flip",
            "divergence", "cauchy"}


# -- registry --------------------------------------------------------------------------

CRITERIA: list[tuple[int, str, float, Callable, bool]] = [
    (1, "adjoint involution and antihomomorphism", 10, criterion_1, False),
    (2, "Killing chains n=2,3,4", 180, criterion_2, False),
    (3, "conformal Killing chains n=3,4,5", 2100, criterion_3, True),
    (4, "elasticity identities (Cauchy, Airy, Beltrami)", 120, criterion_4, False),
    (5, "Einstein n=4 double duality", 300, criterion_5, False),
    (6, "double pendulum", 30, criterion_6, False),
    (7, "Vessiot family", 120, criterion_7, False),
    (8, "Spencer cohomology and Lanczos bookkeeping", 60, criterion_8, False),
    (9, "oracle equivalence of cc", 600, criterion_9, True),
    (10, "DSL fuzzing and round trip", 600, criterion_10, False),
]


def run_one(index: int, budget_factory=None, skip_long: bool = False) -> CriterionResult:
    for idx, title, limit, fn, has_long in CRITERIA:
        if idx != index:
            continue
        t0 = time.perf_counter()
        try:
            checks = fn(budget_factory, skip_long=skip_long) if has_long else fn(budget_factory)
        except ResourceBudgetExceeded as exc:
            dt = time.perf_counter() - t0
            return CriterionResult(idx, title, False, dt, limit, {}, "BUDGET", str(exc))
        dt = time.perf_counter() - t0
        ok = bool(checks.pop("_ok")) and dt < limit
        return CriterionResult(idx, title, ok, dt, limit, checks)
    raise KeyError(f"no criterion {index}")


def run_all(budget_factory=None, skip_long: bool = False, only=None) -> list[CriterionResult]:
    idx = [c[0] for c in CRITERIA] if not only else sorted(only)
    return [run_one(i, budget_factory, skip_long) for i in idx]
