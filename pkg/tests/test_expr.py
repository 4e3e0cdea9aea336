import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmercer.errors import ArityError, DomainError, ExprSyntaxError, UnknownIdentifier
from hmercer.expr import BinOp, Call, Const, Neg, Var, evaluate, evaluate_array, parse, to_source


def test_power_node():
    assert parse("x^2").ast == BinOp("^", Var(), Const(2.0))


def test_precedence_shape():
    assert parse("abs(x) + 2*x").ast == BinOp("+", Call("abs", (Var(),)), BinOp("*", Const(2.0), Var()))


def test_power_is_right_associative():
    # 2^(3^2) = 2^9, not (2^3)^2 = 64
    e = parse("2^3^2")
    assert e.ast == BinOp("^", Const(2.0), BinOp("^", Const(3.0), Const(2.0)))
    for x in (-1.0, 0.0, 7.5):
        assert evaluate(e, x) == 512.0


def test_unary_minus_binds_tighter_than_power():
    assert parse("-x^2").ast == BinOp("^", Neg(Var()), Const(2.0))
    assert evaluate(parse("-x^2"), 3.0) == 9.0
    assert evaluate(parse("2^-1"), 0.0) == 0.5


def test_unicode_minus():
    assert parse("x − 1") == parse("x - 1")


@pytest.mark.parametrize(
    "src, x, want",
    [
        ("x^2", 3.0, 9.0),
        ("max(x, 1/x)", 0.5, 2.0),
        ("min(x, 2, 1/x)", 4.0, 0.25),
        ("pow(x, 0.5)", 9.0, 3.0),
        ("ln(exp(x))", 1.25, 1.25),
        ("1.5e1 - x", 5.0, 10.0),
        ("(1 + x) * (1 - x)", 0.5, 0.75),
        ("8 / 4 / 2", 0.0, 1.0),
        ("10 - 4 - 3", 0.0, 3.0),
    ],
)
def test_evaluate(src, x, want):
    assert evaluate(parse(src), x) == pytest.approx(want, rel=0, abs=1e-15)


@pytest.mark.parametrize(
    "src, x",
    [("sqrt(x)", -1.0), ("ln(x)", 0.0), ("ln(x)", -2.0), ("1/x", 0.0), ("x^0.5", -4.0), ("x^-1", 0.0)],
)
def test_domain_errors(src, x):
    with pytest.raises(DomainError):
        evaluate(parse(src), x)


def test_overflow():
    with pytest.raises(OverflowError):
        evaluate(parse("exp(x)"), 1000.0)
    with pytest.raises(OverflowError):
        evaluate(parse("x^400"), 10.0)
    with pytest.raises(OverflowError):
        evaluate_array(parse("exp(x)"), np.array([1.0, 1000.0]))


def test_negative_base_integer_exponent():
    assert evaluate(parse("x^3"), -2.0) == -8.0


@pytest.mark.parametrize(
    "src, exc",
    [
        ("2x", ExprSyntaxError),
        ("x +", ExprSyntaxError),
        ("(x", ExprSyntaxError),
        ("x $ 2", ExprSyntaxError),
        ("", ExprSyntaxError),
        ("y + 1", UnknownIdentifier),
        ("sin(x)", UnknownIdentifier),
        ("pow(x)", ArityError),
        ("abs(x, 1)", ArityError),
        ("max(x)", ArityError),
    ],
)
def test_parse_errors(src, exc):
    with pytest.raises(exc):
        parse(src)


def test_syntax_error_carries_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("2x")
    assert info.value.position == 1


def test_arity_error_fields():
    with pytest.raises(ArityError) as info:
        parse("pow(x, 1, 2)")
    assert (info.value.function, info.value.got, info.value.want) == ("pow", 3, "2")


CORPUS = [
    "x^2",
    "abs(x) + 2*x",
    "2^3^2",
    "-x^2",
    "--x",
    "-(x + 1)",
    "max(x, 1/x)",
    "max(2*x - 1, -x + 3, 0.5*x, 1e-3)",
    "exp(-x) * sqrt(x) / (1 + ln(x))",
    "x - (x - (x - 1))",
    "pow(x, -0.25) + 1.25e-7",
    "abs(x - 3.7) + 0.1",
]


@pytest.mark.parametrize("src", CORPUS)
def test_round_trip(src):
    e = parse(src)
    assert parse(to_source(e)) == e


_leaf = st.one_of(
    st.just(Var()),
    st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Const),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(st.sampled_from(["abs", "exp", "ln", "sqrt"]), children).map(lambda t: Call(t[0], (t[1],))),
        st.tuples(st.sampled_from(["min", "max", "pow"]), children, children).map(lambda t: Call(t[0], (t[1], t[2]))),
    )


@given(st.recursive(_leaf, _extend, max_leaves=12))
@settings(max_examples=300)
def test_round_trip_random_trees(tree):
    assert parse(to_source(tree)).ast == tree


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_identity_is_exact(t):
    assert evaluate(parse("x"), t) == t


@given(st.lists(st.floats(min_value=0.01, max_value=50), min_size=1, max_size=20))
def test_array_matches_scalar(xs):
    e = parse("max(x^2 - 3*x, sqrt(x) + ln(x)) / (1 + abs(x - 2))")
    arr = evaluate_array(e, np.array(xs))
    for x, v in zip(xs, arr):
        assert v == pytest.approx(evaluate(e, x), rel=1e-14, abs=1e-14)


def test_expression_is_callable_and_hashable():
    e = parse("x^2")
    assert e(3.0) == 9.0
    assert list(e(np.array([1.0, 2.0]))) == [1.0, 4.0]
    assert hash(e) == hash(parse("x ^ 2"))


def test_constant_expression():
    assert evaluate(parse("0"), 5.0) == 0.0
    assert math.isclose(evaluate(parse("2.5"), -1.0), 2.5)
