"""The .dop text format: parsing, errors with spans, printing."""

import json
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from dopalg.catalog import CATALOG, airy, build, double_pendulum, killing
from dopalg.groebner import module_equal
from dopalg.ops import DiffOp, OpMatrix
from dopalg.scalars import VarContext, mpq
from dopalg.sysdsl import DslError, parse, parse_coeff, parse_one, print_system, to_dsl, to_text, tokenize

PENDULUM = ("vars t; params g l1 l2; unknowns x th1 th2; system p { eq: d[t,t]x + l1*d[t,t]th1 + g*th1; "
            "eq: d[t,t]x + l2*d[t,t]th2 + g*th2; }")


def test_pendulum_example():
    s = parse_one(PENDULUM)
    assert s.name == "p"
    assert s.unknowns == ["x", "th1", "th2"]
    ref = double_pendulum(False)
    assert s.matrix == ref.matrix


def test_single_derivative():
    s = parse_one("vars x1 x2; unknowns u; system z { eq: d[x1]u; }")
    assert s.matrix == OpMatrix(s.context, [[DiffOp.d(s.context, 0)]], 1)


def test_variable_coefficients():
    s = parse_one("vars x1 x2; unknowns xi1 xi2; system m { eq: x1^2*d[x1]xi1 + xi2; }")
    ctx = s.context
    x1 = ctx.var("x1")
    assert list(s.matrix.rows[0]) == [DiffOp.d(ctx, 0, coeff=x1 * x1), DiffOp.one(ctx)]


def test_shipped_files_parse():
    for name in ("vessiot.dop", "pendulum.dop", "airy.dop"):
        text = resources.files("dopalg").joinpath("data", name).read_text(encoding="utf-8")
        assert parse(text)


def test_shipped_vessiot_matches_catalog():
    text = resources.files("dopalg").joinpath("data", "vessiot.dop").read_text(encoding="utf-8")
    s = parse_one(text)
    assert s.matrix == build("vessiot").matrix


def test_coefficients():
    ctx = VarContext(("x",), ("a",))
    x, a = ctx.var("x"), ctx.var("a")
    assert parse_coeff("(x + a)/(x - a)", ctx) == (x + a) / (x - a)
    assert parse_coeff("-x^2 + 3/4", ctx) == -x ** 2 + mpq(3, 4)
    assert parse_coeff("a^-2", ctx) == 1 / (a * a)
    assert parse_coeff("(x^2 - 1)/(x - 1)", ctx) == x + 1


@pytest.mark.parametrize(
    "text,message,col",
    [
        ("vars x; unknowns u; system s { eq: d[y]u; }", "undeclared", 38),
        ("vars x; unknowns u; system s { eq: x; }", "no unknown", 36),
        ("vars x; unknowns u; system s { eq: 1/0*u; }", "division by zero", 37),
        ("vars x; unknowns u; system s { eq: x^51*u; }", "exponent", 38),
        ("vars x; unknowns u; system s { eq: 1.5*u; }", "unexpected character", 37),
    ],
)
def test_errors_carry_spans(text, message, col):
    with pytest.raises(DslError) as info:
        parse(text)
    e = info.value
    assert message in str(e)
    assert (e.line, e.col) == (1, col)
    assert e.length >= 1
    assert set(e.as_dict()) == {"message", "line", "column", "length"}


def test_errors_on_later_lines():
    with pytest.raises(DslError) as info:
        parse("vars x;\nunknowns u;\nsystem s {\n  eq: d[x]v;\n}")
    assert info.value.line == 4


def test_duplicate_names_rejected():
    with pytest.raises(DslError):
        parse("vars x x; unknowns u; system s { eq: u; }")
    with pytest.raises(DslError):
        parse("vars x; unknowns u; system s { eq: u; } system s { eq: u; }")


def test_tokens_have_positions():
    toks = tokenize("vars x;\n  unknowns u;")
    assert toks[0].line == 1 and toks[0].col == 1
    assert any(t.line == 2 and t.col == 3 for t in toks)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_round_trip(name):
    s = build(name, n=3)
    back = parse_one(to_dsl(s))
    assert back.matrix == s.matrix
    assert back.unknowns == s.unknowns
    assert to_dsl(back) == to_dsl(s)


def test_killing_3_round_trip_module():
    s = killing(3)
    assert module_equal(parse_one(to_dsl(s)).matrix, s.matrix)


def test_airy_text():
    lines = to_text(airy()).split("\n")
    assert lines[:3] == ["sigma11 = d22 lam", "sigma12 = -d12 lam", "sigma22 = d11 lam"]


def test_zero_system_prints():
    ctx = VarContext(("x1",))
    from dopalg.catalog import SystemDef

    s = SystemDef("z", ctx, ["u"], OpMatrix(ctx, [[DiffOp.zero(ctx)]], 1))
    d = json.loads(print_system(s, "json"))
    assert d["matrix"] == {"rows": 1, "cols": 1, "entries": [[[]]]}
    assert parse_one(print_system(s, "dsl")).matrix == s.matrix


def test_unknown_format():
    with pytest.raises(ValueError):
        print_system(airy(), "latex")


_int = st.integers(-5, 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(_int, st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), _int), min_size=1, max_size=5))
def test_random_round_trip(terms):
    ctx = VarContext(("x1", "x2"), ("p",))
    x1, p = ctx.var("x1"), ctx.var("p")
    row = [DiffOp.zero(ctx), DiffOp.zero(ctx)]
    for c, a, b, k, e in terms:
        coeff = c * (x1 ** abs(e) if e else 1) + p
        row[k] = row[k] + DiffOp(ctx, {(a, b): coeff})
    from dopalg.catalog import SystemDef

    s = SystemDef("r", ctx, ["u", "v"], OpMatrix(ctx, [row], 2))
    assert parse_one(to_dsl(s)).matrix == s.matrix
