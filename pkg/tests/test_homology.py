"""Compatibility conditions, resolutions, double duality and ext."""

import pytest

from dopalg.catalog import airy, cauchy, double_pendulum, einstein, killing, pendulum_parametrization, vessiot
from dopalg.groebner import module_equal
from dopalg.homology import (
    NotTerminated,
    cc,
    duality_test,
    euler_characteristic,
    ext_from_chain,
    ext_zero,
    left_invertible,
    resolve,
    same_image,
    torsion_annihilator,
    verify_parametrization,
)
from dopalg.ops import DiffOp, OpMatrix


def test_killing_resolution_shapes():
    R = resolve(killing(2).matrix)
    assert R.ranks == [3, 1, 0]
    assert R.orders == [1, 2]
    R = resolve(killing(3).matrix)
    assert R.ranks == [6, 6, 3, 0]
    assert R.orders == [1, 2, 1]
    assert R.check_exact_composition()
    assert euler_characteristic(R) == 0


def test_truncated_resolution_has_no_euler_characteristic():
    R = resolve(killing(3).matrix, max_steps=1)
    assert not R.terminated
    with pytest.raises(NotTerminated):
        euler_characteristic(R)


def test_max_steps_must_be_positive():
    with pytest.raises(ValueError):
        resolve(killing(2).matrix, max_steps=0)


def test_cc_of_killing_2_is_saint_venant():
    D = killing(2).matrix
    L = cc(D)
    assert L.nrows == 1
    assert (L @ D).is_zero()
    ctx = D.ctx
    # the 2d compatibility d22 e11 - 2 d12 e12 + d11 e22 up to the weight on e12
    assert L.order() == 2
    assert all(e.order() == 2 for e in L.rows[0])


def test_airy_parametrizes_cauchy_2():
    rep = duality_test(cauchy(2).matrix)
    assert rep.parametrizable and rep.verdict == "parametrizable"
    assert rep.parametrization.ncols == 1
    assert same_image(rep.D, airy().matrix)
    assert not same_image(rep.D, airy().matrix.weight_rescale([1, 2, 1], [1]))
    vp = verify_parametrization(cauchy(2).matrix, rep.D)
    assert vp == {"composes_to_zero": True, "generates_all_cc": True}


def test_einstein_4_has_torsion():
    rep = duality_test(einstein(4).matrix)
    assert not rep.parametrizable
    assert len(rep.torsion) == 10
    ctx = rep.D1.ctx
    box = sum((DiffOp.d(ctx, i, i) for i in range(1, 4)), DiffOp.d(ctx, 0, 0))
    for t in rep.torsion:
        assert t.annihilator == box


def test_pendulum_controllability_depends_on_lengths():
    rep = duality_test(double_pendulum(False).matrix)
    assert rep.parametrizable and rep.torsion == []
    assert same_image(rep.D, pendulum_parametrization())
    rep = duality_test(double_pendulum(True).matrix, annihilator_order=2)
    assert len(rep.torsion) == 1
    t = rep.torsion[0]
    ctx = rep.D1.ctx
    assert t.row == [DiffOp.zero(ctx), DiffOp.one(ctx), -DiffOp.one(ctx)]
    g, l = ctx.var("g"), ctx.var("l")
    assert t.annihilator == DiffOp.d(ctx, 0, 0) + DiffOp.const(ctx, g / l)


def test_torsion_annihilator_of_module_element_is_one():
    D1 = double_pendulum(True).matrix
    a, k = torsion_annihilator(D1.rows[0], D1)
    assert a == DiffOp.one(D1.ctx) and k == 0


def test_vessiot_cc_and_left_invertibility():
    sd = vessiot("c")
    L = cc(sd.matrix)
    ctx = sd.context
    c = ctx.var("c")
    expect = OpMatrix(ctx, [[-DiffOp.d(ctx, 1), DiffOp.d(ctx, 0), DiffOp.const(ctx, -c)]], 3)
    assert module_equal(L, expect)
    assert left_invertible(cc(vessiot(1).matrix).adjoint())
    assert not left_invertible(cc(vessiot(0).matrix).adjoint())


@pytest.mark.parametrize("c,ext2_zero", [(1, True), (0, False)])
def test_vessiot_ext(c, ext2_zero):
    D1 = vessiot(c).matrix
    R = resolve(D1, 4)
    e1 = ext_zero(D1, 1, resolution=R)
    e2 = ext_zero(D1, 2, resolution=R)
    assert not e1.is_zero and e1.verify()
    assert e2.is_zero == ext2_zero and e2.verify()


def test_ext_independent_of_resolution():
    # a redundant generator changes the chain but not ext^1
    D = killing(2).matrix
    ctx = D.ctx
    extra = [a + b for a, b in zip(D.rows[0], D.rows[2])]
    D2 = OpMatrix(ctx, list(D.rows) + [extra], D.ncols)
    R = resolve(D)
    R2 = resolve(D2)
    assert R2.steps[1].nrows > R.steps[1].nrows
    for i in (1, 2):
        a = ext_from_chain(R.steps, i)
        b = ext_from_chain(R2.steps, i)
        assert a.is_zero == b.is_zero
        assert a.verify() and b.verify()


def test_ext_past_finite_resolution_vanishes():
    D = killing(2).matrix
    R = resolve(D)
    assert ext_zero(D, 5, resolution=R).is_zero


def test_verify_parametrization_rejects_bad_shapes():
    with pytest.raises(ValueError):
        verify_parametrization(killing(2).matrix, killing(2).matrix)
