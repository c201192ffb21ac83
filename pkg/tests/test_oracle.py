"""The graded linear-algebra oracle against the engine's cc()."""

import pytest

from dopalg.catalog import conformal_killing, killing, vessiot
from dopalg.homology import cc, row_weights
from dopalg.oracle import NotGraded, check_cc, graded_weights, relation_dims
from dopalg.ops import OpMatrix


@pytest.mark.parametrize("n", [2, 3])
def test_killing_cc_agrees(n):
    D = killing(n).matrix
    rep = check_cc(D, cc(D))
    assert rep.agree
    assert rep.degrees[0] == 1


def test_conformal_3_agrees():
    D = conformal_killing(3).matrix
    assert check_cc(D, cc(D)).agree


def test_second_step_with_weights():
    D = killing(3).matrix
    L = cc(D)
    M = cc(L, col_weights=row_weights(D))
    assert check_cc(L, M, col_weights=row_weights(D)).agree


def test_incomplete_cc_is_caught():
    D = killing(3).matrix
    L = cc(D)
    part = OpMatrix(L.ctx, L.rows[:-1], L.ncols)
    rep = check_cc(D, part)
    assert not rep.agree
    assert any(g < b for g, b in zip(rep.generated, rep.brute))


def test_frozen_relation_counts():
    # Saint-Venant: one relation in degree 3 for n = 2, then its multiples
    D = killing(2).matrix
    assert [relation_dims(D, k)[0] for k in (1, 2, 3, 4)] == [0, 0, 1, 2]


def test_non_graded_rejected():
    with pytest.raises(NotGraded):
        graded_weights(vessiot(1).matrix)


def test_non_relation_rejected():
    D = killing(2).matrix
    bogus = OpMatrix(D.ctx, [[D.rows[0][0]] * 3], 3)
    with pytest.raises(ValueError):
        check_cc(D, bogus)
