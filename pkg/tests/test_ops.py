"""Weyl-algebra operators and operator matrices."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dopalg.ops import DiffOp, OpMatrix, ZeroWeight, normalize
from dopalg.scalars import ONE, VarContext, mpq

CTX = VarContext(("x1", "x2"))
X1, X2 = CTX.var("x1"), CTX.var("x2")


def d(*idx, c=ONE):
    return DiffOp.d(CTX, *idx, coeff=c)


def test_weyl_relation():
    # d1 x1 = x1 d1 + 1
    assert d(0) * DiffOp.const(CTX, X1) == d(0, c=X1) + DiffOp.one(CTX)
    # d1^2 x1^2 = x1^2 d1^2 + 4 x1 d1 + 2
    lhs = d(0, 0) * DiffOp.const(CTX, X1 * X1)
    assert lhs == d(0, 0, c=X1 * X1) + d(0, c=4 * X1) + DiffOp.const(CTX, 2)


def test_variables_commute_with_other_derivations():
    assert d(1) * DiffOp.const(CTX, X1) == d(1, c=X1)


def test_apply_matches_composition():
    P = d(0, c=X2) + DiffOp.const(CTX, X1)
    Q = d(1, 1) + d(0)
    f = X1 * X1 * X2 * X2 * X2
    assert (P * Q).apply(f) == P.apply(Q.apply(f))


def test_adjoint_of_monomials():
    assert d(0).adjoint() == -d(0)
    assert d(0, 1).adjoint() == d(0, 1)
    # ad(x1 d1) = -d1 x1 = -x1 d1 - 1
    assert d(0, c=X1).adjoint() == -d(0, c=X1) - DiffOp.one(CTX)


def test_order_and_homogeneity():
    P = d(0, 0) + d(1)
    assert P.order() == 2
    assert not P.is_homogeneous()
    assert (d(0, 1) + d(1, 1)).is_homogeneous()
    assert DiffOp.zero(CTX).order() < 0


def test_str():
    assert str(d(0, c=X1 * X1) + DiffOp.const(CTX, 2 * X1)) == "x1^2*dx1 + 2*x1"
    assert str(-d(0, 1)) == "-dx1dx2"


def test_normalize_words():
    # a string names the variable to differentiate; d1 * x1 = x1 d1 + 1
    assert normalize(CTX, [["x1", X1]]) == d(0, c=X1) + DiffOp.one(CTX)
    assert normalize(CTX, [[0, 1], [X2, 1]]) == d(0, 1) + d(1, c=X2)


def test_matrix_adjoint_transposes():
    A = OpMatrix(CTX, [[d(0), d(1, c=X1)]], 2)
    B = A.adjoint()
    assert B.shape == (2, 1)
    assert B[0, 0] == -d(0)
    assert B[1, 0] == -(d(1) * DiffOp.const(CTX, X1))


def test_matrix_compose_shapes():
    A = OpMatrix(CTX, [[d(0), d(1)]], 2)
    B = OpMatrix(CTX, [[d(1)], [-d(0)]], 1)
    assert (A @ B).is_zero()
    with pytest.raises(ValueError):
        A @ A


def test_weight_rescale():
    A = OpMatrix(CTX, [[d(0), d(1)], [d(1), d(0)]], 2)
    W = A.weight_rescale([1, 2], [3, 1])
    assert W[1, 0] == d(1, c=mpq(6))
    with pytest.raises(ZeroWeight):
        A.weight_rescale([0, 1], [1, 1])


def test_identity_and_stack():
    I2 = OpMatrix.identity(CTX, 2)
    A = OpMatrix(CTX, [[d(0), d(1)]], 2)
    assert A @ I2 == A
    assert A.stack(A).shape == (2, 2)


# -- properties ------------------------------------------------------------

coeffs = st.sampled_from([mpq(1), mpq(-2), mpq(1, 3), X1, X2, X1 * X2 + 1, X1 - 2 * X2, ONE / (1 + X1 * X1)])
multi = st.tuples(st.integers(0, 2), st.integers(0, 2))


@st.composite
def ops(draw):
    terms = draw(st.lists(st.tuples(multi, coeffs), max_size=3))
    out = DiffOp.zero(CTX)
    for mu, c in terms:
        out = out + DiffOp(CTX, {mu: c})
    return out


@settings(max_examples=60, deadline=None)
@given(ops(), ops())
def test_adjoint_involution_and_antihomomorphism(P, Q):
    assert P.adjoint().adjoint() == P
    assert (P * Q).adjoint() == Q.adjoint() * P.adjoint()


@settings(max_examples=40, deadline=None)
@given(ops(), ops(), ops())
def test_composition_is_associative(P, Q, R):
    assert (P * Q) * R == P * (Q * R)


@settings(max_examples=40, deadline=None)
@given(ops(), ops(), ops())
def test_composition_distributes(P, Q, R):
    assert P * (Q + R) == P * Q + P * R
    assert (Q + R) * P == Q * P + R * P
