"""Shapes and a few hand-checked entries of the built-in systems."""

import pytest

from dopalg.catalog import (
    CATALOG,
    MetricSpec,
    UnsupportedDimension,
    bianchi,
    build,
    cauchy,
    conformal_killing,
    divergence,
    einstein,
    killing,
    lanczos_check,
    pairing_weights,
    riemann,
    ricci,
    sym_index,
    sym_names,
    trace_flip,
)
from dopalg.homology import resolve
from dopalg.ops import DiffOp, OpMatrix
from dopalg.scalars import mpq


def test_killing_2_rows():
    sd = killing(2)
    ctx = sd.context
    d = lambda *i, c=1: DiffOp.d(ctx, *i, coeff=mpq(c))
    z = DiffOp.zero(ctx)
    expect = OpMatrix(ctx, [[d(0, c=2), z], [d(1), d(0)], [z, d(1, c=2)]], 2)
    assert sd.matrix == expect
    assert sd.unknowns == ["xi1", "xi2"]
    assert sd.equations == ["Omega11", "Omega12", "Omega22"]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_killing_shapes(n):
    sd = killing(n)
    assert sd.matrix.nrows == n * (n + 1) // 2
    assert sd.matrix.ncols == n
    assert sd.matrix.order() == 1


@pytest.mark.parametrize("n", [3, 4])
def test_conformal_shapes(n):
    M = conformal_killing(n).matrix
    assert M.nrows == n * (n + 1) // 2 - 1
    assert M.ncols == n


def test_conformal_needs_three_dimensions():
    with pytest.raises(UnsupportedDimension):
        conformal_killing(2)


def test_sym_indexing():
    assert sym_names("s", 3) == ["s11", "s12", "s13", "s22", "s23", "s33"]
    assert sym_index(3, 2, 0) == sym_index(3, 0, 2) == 2
    assert pairing_weights(3) == [1, 2, 2, 1, 2, 1]
    assert pairing_weights(MetricSpec(2, (1, -1))) == [1, -2, 1]


def test_riemann_bianchi_n4():
    R = riemann(4).matrix
    B = bianchi(4).matrix
    assert (R.nrows, R.ncols, R.order()) == (20, 10, 2)
    assert (B.nrows, B.ncols, B.order()) == (20, 20, 1)
    assert (B @ R).is_zero()


def test_minkowski_ranks_match_euclidean():
    eu = resolve(killing(4).matrix).ranks
    mk = resolve(killing(MetricSpec(4, (-1, 1, 1, 1))).matrix).ranks
    assert eu == mk == [10, 20, 20, 6, 0]


def test_einstein_identities():
    m = MetricSpec(3)
    E = einstein(m).matrix
    assert E == trace_flip(m).matrix @ ricci(m).matrix
    assert (divergence(m).matrix @ E).is_zero()
    assert (ricci(m).matrix @ killing(m).matrix).is_zero()


def test_cauchy_rows():
    M = cauchy(3).matrix
    assert (M.nrows, M.ncols) == (3, 6)


def test_lanczos_bookkeeping():
    out = lanczos_check()
    assert out["lanczos_dim"] == 20
    assert out["sequence"] == [20, 24, 4]
    assert out["sequence_exact"]
    assert out["riemann_parametrizes_bianchi_cc"]["composes_to_zero"]


def test_registry():
    assert build("airy").matrix.nrows == 3
    assert build("killing", n=3).matrix.ncols == 3
    assert build("vessiot", c=1).context.params == ()
    with pytest.raises(KeyError):
        build("nope")
    with pytest.raises(ValueError):
        build("killing")
    for name in CATALOG:
        sd = build(name, n=3)
        assert sd.matrix.ncols == len(sd.unknowns)
