"""Concrete operators: Killing sequences, curvature, elasticity, Vessiot, pendulum.

All metric operators are linearized at a flat constant diagonal metric
omega = diag(signature).  Symmetric 2-tensors are stored by their components
ij with i <= j, in lexicographic order (11, 12, ..., 1n, 22, ...).  The
natural pairing sigma^{ij} Omega_{ij} then has weight 1 on diagonal and 2 on
off-diagonal components; :func:`pairing_weights` returns these weights
(times the metric signs used to lower indices), and no factor 2 is ever
inserted silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .groebner import Budget
from .ops import DiffOp, OpMatrix
from .scalars import ONE, VarContext, mpq

__all__ = [
    "CATALOG",
    "MetricSpec",
    "SystemDef",
    "UnsupportedDimension",
    "airy",
    "beltrami",
    "bianchi",
    "build",
    "cauchy",
    "conformal_killing",
    "divergence",
    "double_pendulum",
    "einstein",
    "killing",
    "lanczos_check",
    "pairing_weights",
    "ricci",
    "riemann",
    "sym_index",
    "sym_pairs",
    "trace_flip",
    "vessiot",
]

HALF = mpq(1, 2)


class UnsupportedDimension(ValueError):
    pass


@dataclass(frozen=True)
class MetricSpec:
    n: int
    signature: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise UnsupportedDimension("n must be at least 1")
        sig = tuple(self.signature) if self.signature else (1,) * self.n
        if len(sig) != self.n or any(s not in (1, -1) for s in sig):
            raise ValueError("signature must be n entries of +1 or -1")
        object.__setattr__(self, "signature", sig)

    @classmethod
    def euclidean(cls, n: int) -> "MetricSpec":
        return cls(n)

    @classmethod
    def minkowski(cls, n: int) -> "MetricSpec":
        return cls(n, (-1,) + (1,) * (n - 1))

    @property
    def ctx(self) -> VarContext:
        return VarContext(tuple(f"x{i + 1}" for i in range(self.n)))

    def w(self, i: int) -> int:
        """omega_ii, which equals its own inverse."""
        return self.signature[i]


@dataclass
class SystemDef:
    name: str
    context: VarContext
    unknowns: list[str]
    matrix: OpMatrix
    provenance: str = ""
    equations: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.unknowns) != self.matrix.ncols:
            raise ValueError("unknown list does not match the matrix")
        if not self.equations:
            self.equations = [f"e{i + 1}" for i in range(self.matrix.nrows)]


def _metric(m) -> MetricSpec:
    if isinstance(m, MetricSpec):
        return m
    return MetricSpec(int(m))


def sym_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def sym_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return sym_pairs(n).index((i, j))


def sym_names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}{j + 1}" for i, j in sym_pairs(n)]


def pairing_weights(m) -> list:
    """Weight of Omega_ij in sigma^{ij} Omega_ij after lowering sigma's indices."""
    m = _metric(m)
    return [mpq((1 if i == j else 2) * m.w(i) * m.w(j)) for i, j in sym_pairs(m.n)]


def _ops(ctx):
    z = DiffOp.zero(ctx)

    def d(*idx, c=ONE):
        return DiffOp.d(ctx, *idx, coeff=c)

    return z, d


# -- Killing family ------------------------------------------------------


def _killing_matrix(m: MetricSpec) -> OpMatrix:
    ctx = m.ctx
    z, d = _ops(ctx)
    rows = []
    for i, j in sym_pairs(m.n):
        row = [z] * m.n
        # Omega_ij = omega_jj d_i xi^j + omega_ii d_j xi^i
        row[j] = row[j] + d(i, c=m.w(j))
        row[i] = row[i] + d(j, c=m.w(i))
        rows.append(row)
    return OpMatrix(ctx, rows, m.n)


def killing(m) -> SystemDef:
    m = _metric(m)
    return SystemDef(
        "killing", m.ctx, [f"xi{k + 1}" for k in range(m.n)], _killing_matrix(m),
        "Lie derivative of a flat metric along xi", sym_names("Omega", m.n),
    )


def conformal_killing(m) -> SystemDef:
    """Trace-free part of the Killing operator; the last diagonal row is dropped."""
    m = _metric(m)
    if m.n < 3:
        raise UnsupportedDimension("the conformal Killing sequence is built for n >= 3")
    K = _killing_matrix(m)
    ctx, n = m.ctx, m.n
    pairs = sym_pairs(n)
    # tr Omega = sum_r omega^rr Omega_rr
    tr = [DiffOp.zero(ctx)] * n
    for r in range(n):
        row = K.rows[pairs.index((r, r))]
        tr = [a + b.scale(m.w(r)) for a, b in zip(tr, row)]
    rows, names = [], []
    last = pairs.index((n - 1, n - 1))
    for idx, (i, j) in enumerate(pairs):
        if idx == last:
            continue
        row = list(K.rows[idx])
        if i == j:
            row = [a - t.scale(mpq(m.w(i), n)) for a, t in zip(row, tr)]
        rows.append(row)
        names.append(f"Omega{i + 1}{j + 1}")
    M = OpMatrix(ctx, rows, n)
    return SystemDef("conformal_killing", ctx, [f"xi{k + 1}" for k in range(n)], M,
                     "trace-free Killing operator", names)


@lru_cache(maxsize=None)
def _riemann_matrix(m: MetricSpec) -> OpMatrix:
    from .homology import cc

    return cc(_killing_matrix(m), Budget())


def riemann(m) -> SystemDef:
    """Defined as the minimized CC of the Killing operator."""
    m = _metric(m)
    R = _riemann_matrix(m)
    return SystemDef("riemann", m.ctx, sym_names("Omega", m.n), R, "generating CC of killing")


@lru_cache(maxsize=None)
def _bianchi_matrix(m: MetricSpec) -> OpMatrix:
    from .homology import cc, row_weights

    R = _riemann_matrix(m)
    return cc(R, Budget(), row_weights(_killing_matrix(m)))


def bianchi(m) -> SystemDef:
    m = _metric(m)
    B = _bianchi_matrix(m)
    return SystemDef("bianchi", m.ctx, [f"R{i + 1}" for i in range(B.ncols)], B, "generating CC of riemann")


def _ricci_matrix(m: MetricSpec) -> OpMatrix:
    ctx, n = m.ctx, m.n
    pairs = sym_pairs(n)
    N = len(pairs)
    z, d = _ops(ctx)
    rows = []
    for i, j in pairs:
        row = [z] * N
        for r in range(n):
            # 1/2 d_r d_i Omega^r_j + 1/2 d_r d_j Omega^r_i, with Omega^r_j = omega^rr Omega_rj
            row[sym_index(n, r, j)] += d(r, i, c=HALF * m.w(r))
            row[sym_index(n, r, i)] += d(r, j, c=HALF * m.w(r))
            # -1/2 box Omega_ij
            row[sym_index(n, i, j)] += d(r, r, c=-HALF * m.w(r))
            # -1/2 d_ij tr Omega
            row[sym_index(n, r, r)] += d(i, j, c=-HALF * m.w(r))
        rows.append(row)
    return OpMatrix(ctx, rows, N)


def ricci(m) -> SystemDef:
    m = _metric(m)
    return SystemDef("ricci", m.ctx, sym_names("Omega", m.n), _ricci_matrix(m),
                     "linearized Ricci tensor", sym_names("R", m.n))


def _trace_flip_matrix(m: MetricSpec) -> OpMatrix:
    ctx, n = m.ctx, m.n
    pairs = sym_pairs(n)
    N = len(pairs)
    rows = []
    for a, (i, j) in enumerate(pairs):
        row = [DiffOp.zero(ctx)] * N
        row[a] = DiffOp.one(ctx)
        if i == j:
            for r in range(n):
                b = pairs.index((r, r))
                row[b] = row[b] + DiffOp.const(ctx, -HALF * m.w(i) * m.w(r))
        rows.append(row)
    return OpMatrix(ctx, rows, N)


def trace_flip(m) -> SystemDef:
    m = _metric(m)
    return SystemDef("trace_flip", m.ctx, sym_names("Omega", m.n), _trace_flip_matrix(m),
                     "Omega - 1/2 omega tr(Omega)", sym_names("C", m.n))


def einstein(m) -> SystemDef:
    """E = C o R, checked against the divergence identity at construction."""
    m = _metric(m)
    E = _trace_flip_matrix(m) @ _ricci_matrix(m)
    if not (_divergence_matrix(m) @ E).is_zero():
        raise AssertionError("divergence of the linearized Einstein operator is not zero")
    return SystemDef("einstein", m.ctx, sym_names("Omega", m.n), E,
                     "linearized Einstein tensor", sym_names("E", m.n))


def _divergence_matrix(m: MetricSpec) -> OpMatrix:
    ctx, n = m.ctx, m.n
    N = len(sym_pairs(n))
    z, d = _ops(ctx)
    rows = []
    for j in range(n):
        row = [z] * N
        for r in range(n):
            row[sym_index(n, r, j)] = row[sym_index(n, r, j)] + d(r, c=m.w(r))
        rows.append(row)
    return OpMatrix(ctx, rows, N)


def divergence(m) -> SystemDef:
    m = _metric(m)
    return SystemDef("divergence", m.ctx, sym_names("E", m.n), _divergence_matrix(m),
                     "omega^rr d_r E_rj", [f"f{j + 1}" for j in range(m.n)])


def cauchy(m) -> SystemDef:
    """d_r sigma^{rj} on the components sigma^{ij}, i <= j."""
    m = _metric(m)
    ctx, n = m.ctx, m.n
    N = len(sym_pairs(n))
    z, d = _ops(ctx)
    rows = []
    for j in range(n):
        row = [z] * N
        for r in range(n):
            row[sym_index(n, r, j)] = row[sym_index(n, r, j)] + d(r)
        rows.append(row)
    return SystemDef("cauchy", ctx, sym_names("sigma", n), OpMatrix(ctx, rows, N),
                     "stress divergence", [f"f{j + 1}" for j in range(n)])


# -- elasticity potentials -----------------------------------------------


def airy() -> SystemDef:
    ctx = VarContext(("x1", "x2"))
    z, d = _ops(ctx)
    M = OpMatrix(ctx, [[d(1, 1)], [d(0, 1, c=-1)], [d(0, 0)]], 1)
    return SystemDef("airy", ctx, ["lam"], M, "Airy stress function", sym_names("sigma", 2))


def beltrami(weighted: bool = False) -> SystemDef:
    """The two 6x6 Beltrami stress-function matrices at n = 3.

    Rows are sigma^11, sigma^12, sigma^13, sigma^22, sigma^23, sigma^33; the
    weighted form multiplies the off-diagonal rows by 2 and is symmetric.
    """
    ctx = VarContext(("x1", "x2", "x3"))
    z, d = _ops(ctx)
    rows = [
        [z, z, z, d(2, 2), d(1, 2, c=-2), d(1, 1)],
        [z, d(2, 2, c=-1), d(1, 2), z, d(0, 2), d(0, 1, c=-1)],
        [z, d(1, 2), d(1, 1, c=-1), d(0, 2, c=-1), d(0, 1), z],
        [d(2, 2), z, d(0, 2, c=-2), z, z, d(0, 0)],
        [d(1, 2, c=-1), d(0, 2), d(0, 1), z, d(0, 0, c=-1), z],
        [d(1, 1), d(0, 1, c=-2), z, d(0, 0), z, z],
    ]
    M = OpMatrix(ctx, rows, 6)
    name = "beltrami"
    if weighted:
        M = M.weight_rescale([1, 2, 2, 1, 2, 1], [1] * 6)
        name = "beltrami_weighted"
    return SystemDef(name, ctx, sym_names("phi", 3), M, "Beltrami stress functions", sym_names("sigma", 3))


# -- Vessiot and the pendulum --------------------------------------------


def vessiot(c="c") -> SystemDef:
    """Medolaghi rows for alpha = (1 - c x2) dx1, beta = dx1 ^ dx2, so d alpha = c beta.

    ``c`` is a rational number or the name of a symbolic parameter.
    """
    if isinstance(c, str):
        ctx = VarContext(("x1", "x2"), (c,))
        cv = ctx.var(c)
    else:
        ctx = VarContext(("x1", "x2"))
        cv = mpq(c)
    x2 = ctx.var("x2")
    a1 = 1 - cv * x2
    z, d = _ops(ctx)
    rows = [
        [d(0, c=a1), DiffOp.const(ctx, -cv)],
        [d(1, c=a1), z],
        [d(0), d(1)],
    ]
    M = OpMatrix(ctx, rows, 2)
    return SystemDef("vessiot", ctx, ["xi1", "xi2"], M, "Medolaghi equations of a Vessiot family",
                     ["eta1", "eta2", "eta3"])


def double_pendulum(equal: bool = False) -> SystemDef:
    ctx = VarContext(("t",), ("g", "l") if equal else ("g", "l1", "l2"))
    g = ctx.var("g")
    l1 = ctx.var("l") if equal else ctx.var("l1")
    l2 = ctx.var("l") if equal else ctx.var("l2")
    z, d = _ops(ctx)
    rows = [
        [d(0, 0), d(0, 0, c=l1) + DiffOp.const(ctx, g), z],
        [d(0, 0), z, d(0, 0, c=l2) + DiffOp.const(ctx, g)],
    ]
    return SystemDef("double_pendulum_equal" if equal else "double_pendulum", ctx, ["x", "th1", "th2"],
                     OpMatrix(ctx, rows, 3), "bar with two pendulums")


def pendulum_parametrization() -> OpMatrix:
    """The 4th-order phi column for l1 != l2."""
    sd = double_pendulum(False)
    ctx = sd.context
    g, l1, l2 = ctx.var("g"), ctx.var("l1"), ctx.var("l2")
    z, d = _ops(ctx)
    c = lambda v: DiffOp.const(ctx, v)
    x = d(0, 0, 0, 0, c=-l1 * l2) + d(0, 0, c=-g * (l1 + l2)) + c(-g * g)
    th1 = d(0, 0, 0, 0, c=l2) + d(0, 0, c=g)
    th2 = d(0, 0, 0, 0, c=l1) + d(0, 0, c=g)
    return OpMatrix(ctx, [[x], [th1], [th2]], 1)


# -- Lanczos -------------------------------------------------------------


def lanczos_check(budget: Budget | None = None) -> dict:
    """Bianchi at n = 4 and the dimension bookkeeping of the Lanczos potential."""
    from .homology import cc, verify_parametrization
    from .spencer import delta_complex, killing_symbol, lanczos_space

    m = MetricSpec(4)
    B = _bianchi_matrix(m)
    R = _riemann_matrix(m)
    dim, _ = lanczos_space(4)
    rep = delta_complex(killing_symbol(4), 4)
    h3 = rep.cohomology[3]
    seq = (h3, 24, 4)
    exact = seq[0] - seq[1] + seq[2] == 0 and dim == seq[0]
    vp = verify_parametrization(B, R, budget)
    return {
        "bianchi_rows": B.nrows,
        "bianchi_order": B.order(),
        "lanczos_dim": dim,
        "sequence": list(seq),
        "sequence_exact": exact,
        "riemann_parametrizes_bianchi_cc": vp,
    }


# -- registry ------------------------------------------------------------


def _needs_n(f):
    def g(n=None, signature=None, **kw):
        if n is None:
            raise ValueError("this catalog entry needs --n")
        m = MetricSpec(n, tuple(signature) if signature else ())
        return f(m)

    return g


CATALOG = {
    "killing": _needs_n(killing),
    "conformal_killing": _needs_n(conformal_killing),
    "riemann": _needs_n(riemann),
    "bianchi": _needs_n(bianchi),
    "ricci": _needs_n(ricci),
    "einstein": _needs_n(einstein),
    "trace_flip": _needs_n(trace_flip),
    "divergence": _needs_n(divergence),
    "cauchy": _needs_n(cauchy),
    "airy": lambda **kw: airy(),
    "beltrami": lambda **kw: beltrami(False),
    "beltrami_weighted": lambda **kw: beltrami(True),
    "vessiot": lambda c="c", **kw: vessiot(c),
    "double_pendulum": lambda **kw: double_pendulum(False),
    "double_pendulum_equal": lambda **kw: double_pendulum(True),
}


def build(name: str, n: int | None = None, signature: Sequence[int] | None = None, **kw) -> SystemDef:
    try:
        f = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    return f(n=n, signature=signature, **kw)
