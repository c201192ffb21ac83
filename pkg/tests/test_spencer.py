"""Symbols, prolongations and Spencer delta-cohomology."""

import pytest

from dopalg.spencer import (
    conformal_symbol,
    delta_complex,
    exponents,
    full_symbol,
    killing_symbol,
    killing_symbol_by_formula,
    lanczos_space,
    prolong,
    symbol_of,
)
from dopalg.catalog import killing
from dopalg.ops import DiffOp, OpMatrix
from dopalg.scalars import VarContext


def test_exponents():
    assert exponents(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(exponents(3, 3)) == 10


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_killing_symbol_matches_formula(n):
    a, b = killing_symbol(n), killing_symbol_by_formula(n)
    assert a.dim == b.dim == n * (n - 1) // 2
    assert prolong(a).dim == 0


def test_minkowski_symbol_dimension():
    assert killing_symbol(4, (-1, 1, 1, 1)).dim == 6
    assert killing_symbol_by_formula(4, (-1, 1, 1, 1)).dim == 6


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_killing_cohomology(n):
    rep = delta_complex(killing_symbol(n), min(n, 3))
    assert rep.delta_squared_zero
    assert rep.cohomology[0] == 0 and rep.cohomology[1] == 0
    assert rep.cohomology[2] == n * n * (n * n - 1) // 12
    if n >= 3:
        assert rep.cohomology[3] == n * n * (n * n - 1) * (n - 2) // 24


@pytest.mark.parametrize("n", [3, 4, 5])
def test_conformal_prolongations(n):
    g = conformal_symbol(n)
    assert g.dim == n * (n - 1) // 2 + 1
    g2 = prolong(g)
    assert g2.dim == n
    assert prolong(g2).dim == 0


def test_full_symbol_is_acyclic():
    rep = delta_complex(full_symbol(2, 1, 1))
    assert all(v == 0 for s, v in rep.cohomology.items() if s > 0)


def test_symbol_of_rejects_variable_coefficients():
    ctx = VarContext(("x1",))
    M = OpMatrix(ctx, [[DiffOp.d(ctx, 0, coeff=ctx.var("x1"))]], 1)
    with pytest.raises(ValueError):
        symbol_of(M)


def test_s_max_bound():
    with pytest.raises(ValueError):
        delta_complex(killing_symbol(2), 3)


def test_lanczos_dimensions():
    assert lanczos_space(4)[0] == 20
    assert lanczos_space(2)[0] == 2


def test_report_serializes():
    d = delta_complex(symbol_of(killing(2).matrix)).as_dict()
    assert d["cohomology"]["2"] == 1
