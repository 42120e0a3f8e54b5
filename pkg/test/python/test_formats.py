import random

import pytest
import sympy

from nilknap import KPInstance, NilknapError, NormalForm, ParseError, Polynomial, error_code
from nilknap.constexpr import Pow, value
from nilknap.formats import (
    format_instance,
    format_matrices,
    format_system,
    looks_like_instance,
    parse_equation,
    parse_instance,
    parse_system,
    parse_witness,
    parse_word,
)
from nilknap.group import generator

from test_utils import fork_set_rng, random_instance, random_quadratic_system


def test_parse_system_with_notes_and_comments():
    text = "# note: from a worked example\n# plain comment\nvars: x y\n\neq: x*y = 6\neq: (x - y)^2 = 1\n"
    system = parse_system(text)
    assert system.variables == ("x", "y")
    assert system.notes == ("from a worked example",)
    assert [eq.to_text(system.variables) for eq in system.equations] == ["x*y = 6", "x^2 - 2*x*y + y^2 = 1"]
    assert format_system(system) == (
        "# note: from a worked example\nvars: x y\neq: x*y = 6\neq: x^2 - 2*x*y + y^2 = 1\n"
    )


def test_expression_forms():
    x = Polynomial.variable("x")
    assert parse_equation("-x^2 + 3 = 0", ["x"]).difference() == -(x * x) + 3
    assert parse_equation("2^3*x = 1", ["x"]).lhs.coefficient(("x",)) == 8
    assert parse_equation("1/2*x = 3", ["x"]).lhs.coefficient(("x",)) == sympy.Rational(1, 2)
    assert parse_equation("2/3/4*x = 3", ["x"]).lhs.coefficient(("x",)) == sympy.Rational(1, 6)
    assert parse_equation("x^0 = 1", ["x"]).difference().is_zero()
    eq = parse_equation("B = mul(2,pow(2,add(pow(5,59),1)))*x", ["B", "x"])
    assert eq.to_text(["B", "x"]) == "B = mul(2,pow(2,add(pow(5,59),1)))*x"
    big = parse_equation("y = pow(5,59)", ["y"]).rhs.coefficient(())
    assert isinstance(big, Pow)
    assert value(big) == 5 ** 59
    # term trees are kept next to the polynomial
    lhs, rhs = parse_equation("x*(x + 1) = 2", ["x"]).terms
    assert lhs.to_polynomial() == x * x + x


parse_failures = [
    ("vars: x\neq: x + = 1\n", 2, 9),
    ("vars: x\neq: x = y\n", 2, 9),
    ("vars: x\neq: x = 1 = 2\n", 2, 11),
    ("vars: x\neq: x $ 1 = 0\n", 2, 7),
    ("vars: x\neq: x/2 = 1\n", 2, 6),
    ("eq: x = 1\n", 1, 1),
    ("vars: x\nsolve: x\n", 2, 1),
    ("vars: x x\n", 1, 1),
    ("vars: x\neq: pow(x,2) = 1\n", 2, 5),
    ("# only a comment\n", 1, 1),
    ("vars: lambda\n", 1, 7),
    ("vars: x Integer\n", 1, 9),
    ("vars: x\neq: x^y = 1\n", 2, 7),
    ("vars: x\neq: pow(2) = 1\n", 2, 5),
    ("vars: x\neq: (x + 1 = 1\n", 2, 12),
]


@pytest.fixture(params=parse_failures)
def failure_extract(request):
    return request.param


def test_parse_errors_carry_positions(failure_extract):
    text, line, column = failure_extract
    with pytest.raises(ParseError) as err:
        parse_system(text)
    assert err.value.code is error_code.PARSE_ERROR
    assert (err.value.line, err.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(err.value)


@fork_set_rng(seed=0)
def test_system_text_round_trip(samples):
    for _ in range(samples or 50):
        system = random_quadratic_system(random.randint(1, 3), random.randint(0, 3))
        text = format_system(system)
        again = parse_system(text)
        assert again == system
        assert format_system(again) == text


def test_parse_word():
    assert parse_word("x1^2 x2^3 c1,2^-6", 2) == NormalForm(2, (2, 3), {(1, 2): -6})
    assert parse_word("x2 x1", 2) == NormalForm(2, (1, 1), {(1, 2): -1})
    assert parse_word("x3^{-2}", 3) == generator(3, 3, -2)
    assert parse_word(" 1 ", 4).is_identity()
    with pytest.raises(ParseError) as err:
        parse_word("x1 c2,1", 2)
    assert err.value.column == 4
    with pytest.raises(ParseError):
        parse_word("x3", 2)
    with pytest.raises(ParseError):
        parse_word("y1", 2)


def test_parse_instance():
    text = "rank: 2\n# comment\ng1: x2\ng2: x1\ng: x1^2 x2^3 c1,2^-6\nmap:\n  x: g1\n  y: g2\n"
    instance = parse_instance(text)
    assert instance.rank == 2
    assert instance.inputs == (generator(2, 2), generator(1, 2))
    assert instance.target == NormalForm(2, (2, 3), {(1, 2): -6})
    assert instance.variable_map == (("x", 0), ("y", 1))
    assert looks_like_instance(text)
    assert not looks_like_instance("vars: x\n")
    assert format_instance(instance) == "rank: 2\ng1: x2\ng2: x1\ng: x1^2 x2^3 c1,2^-6\nmap:\n  x: g1\n  y: g2\n"


def test_instance_with_identity_entries():
    instance = parse_instance("rank: 3\ng1: 1\ng: c2,3\n")
    assert instance.inputs[0].is_identity()
    assert format_instance(instance) == "rank: 3\ng1: 1\ng: c2,3\n"


instance_failures = [
    ("g1: x1\nrank: 2\ng: 1\n", error_code.PARSE_ERROR),
    ("rank: 2\ng1: x1\n", error_code.PARSE_ERROR),
    ("rank: 2\ng2: x1\ng: 1\n", error_code.PARSE_ERROR),
    ("rank: 0\ng: 1\n", error_code.PARSE_ERROR),
    ("rank: 2\ng1: x1\ng1: x2\ng: 1\n", error_code.PARSE_ERROR),
    ("rank: 2\ng1: x1\ng: 1\nmap:\n  x: g2\n", error_code.INDEX_OUT_OF_RANGE),
    ("rank: 2\ng1: x1\ng: 1\nmap:\n  x: h1\n", error_code.PARSE_ERROR),
]


@pytest.fixture(params=instance_failures)
def instance_failure_extract(request):
    return request.param


def test_instance_errors(instance_failure_extract):
    text, code = instance_failure_extract
    with pytest.raises(NilknapError) as err:
        parse_instance(text)
    assert err.value.code is code


@fork_set_rng(seed=1)
def test_instance_text_round_trip():
    for _ in range(40):
        instance = random_instance(random.randint(1, 4), random.randint(1, 4), target_from_witness=False)
        text = format_instance(instance)
        again = parse_instance(text)
        assert again.inputs == instance.inputs
        assert again.target == instance.target
        assert isinstance(again, KPInstance)


def test_parse_witness():
    names = ("e1", "e2", "e3")
    assert parse_witness("3,-2,0", names) == (3, -2, 0)
    assert parse_witness("e2=-2, e1=3, e3=0", names) == (3, -2, 0)
    failures = [
        ("1,2", error_code.LENGTH_MISMATCH),
        ("e1=1,e2=2", error_code.LENGTH_MISMATCH),
        ("e1=1,e1=2,e2=0,e3=0", error_code.PARSE_ERROR),
        ("e1=1,e2=2,e9=0", error_code.PARSE_ERROR),
        ("1,two,3", error_code.PARSE_ERROR),
    ]
    for text, code in failures:
        with pytest.raises(NilknapError) as err:
            parse_witness(text, names)
        assert err.value.code is code, text


def test_format_matrices():
    text = format_matrices([("x1", [[1, 0], [0, 1]]), ("x2", [[1, -12], [0, 1]])])
    assert text == "# x1\n1 0\n0 1\n\n# x2\n  1 -12\n  0   1\n"
