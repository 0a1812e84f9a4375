import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzlift import expr as ex
from schwarzlift.errors import (BranchPointAtCenter, DomainError, ExprSyntaxError,
                                NonConstantExponent)
from schwarzlift.expr import (Add, Const, Div, Pow, PowerSeries, Sub, Var, eval_jet, parse,
                              series_antiderivative, taylor_expand, to_text)


def test_parse_power_of_mobius():
    assert parse("pow((1+z)/(1-z), 0.5)") == Pow(Div(Add(Const(1), Var()), Sub(Const(1), Var())), 0.5)


def test_parse_decreasing_mobius():
    assert parse("z/(1+z)") == Div(Var(), Add(Const(1), Var()))


def test_syntax_error_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("2*")
    assert info.value.offset == 2
    assert isinstance(info.value, SyntaxError)


def test_offsets_are_bytes():
    # "é" is two bytes in UTF-8, so the bad character sits at byte 3
    with pytest.raises(ExprSyntaxError) as info:
        parse("é+$")
    assert info.value.offset == 3


def test_non_constant_exponent():
    with pytest.raises(NonConstantExponent) as info:
        parse("z^z")
    assert info.value.offset == 2


def test_precedence_and_associativity():
    z = 0.3 + 0.2j
    cases = {
        "2-3-z": 2 - 3 - z,
        "8/2/z": 8 / 2 / z,
        "-z^2": -(z ** 2),
        "2*z^2+1": 2 * z * z + 1,
        "(1+2i)*z": (1 + 2j) * z,
        "z^2^3": (z ** 2) ** 3,
        "z^-1": 1 / z,
        "mobius(1,2,3,4)": (z + 2) / (3 * z + 4),
        "exp(i*pi*z)": np.exp(1j * np.pi * z),
    }
    for text, value in cases.items():
        assert ex.evaluate(parse(text), z) == pytest.approx(value, rel=1e-14), text


def test_whitespace_insensitive():
    assert parse(" pow ( ( 1 + z ) / ( 1 - z ) , 0.5 ) ") == parse("pow((1+z)/(1-z),0.5)")


@pytest.mark.parametrize("text,z0,order,expected", [
    ("z", 0.3, 1, [0.3, 1]),
    ("pow((1+z)/(1-z),0.5)", 0, 2, [1, 1, 0.5]),
    ("log(1/(1-z))", 0, 3, [0, 1, 1 / 2, 1 / 3]),
])
def test_eval_jet_examples(text, z0, order, expected):
    assert np.allclose(eval_jet(parse(text), z0, order).coeffs, expected, atol=1e-15)


def test_eval_jet_outside_disk():
    with pytest.raises(DomainError):
        eval_jet(parse("z"), 1.0, 1)


def test_branch_error_propagates():
    with pytest.raises(BranchPointAtCenter):
        eval_jet(parse("sqrt(z)"), 0.0, 2)


@pytest.mark.parametrize("text,order,expected", [
    ("1/(1-z)", 4, [1, 1, 1, 1, 1]),
    ("exp(z)", 2, [1, 1, 0.5]),
    ("z^2", 5, [0, 0, 1, 0, 0, 0]),
])
def test_taylor_expand_examples(text, order, expected):
    assert np.allclose(taylor_expand(parse(text), order).coeffs, expected, atol=1e-15)


def test_antiderivative_examples():
    assert np.allclose(series_antiderivative(PowerSeries([1, 1, 1])).coeffs, [0, 1, 1 / 2, 1 / 3])
    assert np.allclose(series_antiderivative(PowerSeries([0]), 5).coeffs, [5, 0])
    out = series_antiderivative(taylor_expand(parse("2*z"), 3), 0)
    assert np.allclose(out.coeffs, [0, 0, 1, 0, 0])


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=12))
def test_antiderivative_then_derivative_is_identity(c):
    s = PowerSeries(np.array(c, dtype=complex))
    back = series_antiderivative(s, 3).derivative().coeffs
    # float coefficients: (c/k)*k reproduces c up to one rounding
    assert np.all(np.abs(back - s.coeffs) <= 2 * np.finfo(float).eps * np.abs(s.coeffs))


def test_deep_composition_against_mpmath():
    # composite with a small-radius outer function; the jet is built by substitution
    e = parse("log(sqrt(0.25 - i*z/(1-z)^2) + 0.3)")
    n = 24
    oracle = mpmath.taylor(lambda z: mpmath.log(mpmath.sqrt(0.25 - 1j * z / (1 - z) ** 2) + 0.3), 0, n)
    got = eval_jet(e, 0.0, n).coeffs
    assert np.allclose(got, [complex(c) for c in oracle], rtol=1e-8, atol=1e-10)


def test_high_order_series_is_stable():
    # coefficients of sqrt(1/4 - i w) grow like 4^k; composing with w = i z/(1-z)^2
    # gives a series with unit radius whose tail at |z| = 0.5 is tiny
    s = taylor_expand(parse("sqrt(0.25 - i*(i*z/(1-z)^2))"), 64)
    assert s.tail_estimate(0.5) < 1e-9
    z = 0.3 - 0.2j
    assert abs(s(z) - ex.evaluate(parse("sqrt(0.25 + z/(1-z)^2)"), z)) < 1e-12


def test_diff_inside_composition():
    e = ex.Compose(ex.Diff(parse("exp(2*z)")), parse("z^2"))
    z = 0.2 + 0.1j
    assert ex.evaluate(e, z) == pytest.approx(2 * np.exp(2 * z * z), rel=1e-14)
    c = eval_jet(e, z, 2).coeffs
    assert c[1] == pytest.approx(2 * np.exp(2 * z * z) * 4 * z, rel=1e-12)


def test_series_expr_matches_horner():
    s = taylor_expand(parse("1/(1-z/2)"), 30)
    e = ex.Series(s)
    for z in (0.1, 0.4j, -0.5):
        bound = np.max(np.abs(s.coeffs)) * abs(z) ** 31 / (1 - abs(z))
        assert abs(ex.evaluate(e, z) - ex.horner(s.coeffs, z)) <= bound + 1e-15
        assert abs(eval_jet(e, z, 0).coeffs[0] - s(z)) <= bound + 1e-15


catalog_texts = ["pow((1+z)/(1-z),0.3)", "z/(1+z)", "exp(z)*log(1+z/2)", "sqrt(1+z^2)/(2-z)",
                 "mobius(1,i,0.5,2)", "-z^3+(2-i)*z", "log(1/(1-z))", "exp(-z)^2"]


@pytest.mark.parametrize("text", catalog_texts)
def test_print_parse_round_trip(text):
    e = parse(text)
    back = parse(to_text(e))
    rng = np.random.default_rng(7)
    z = 0.9 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    assert np.allclose(ex.evaluate(back, z), ex.evaluate(e, z), rtol=1e-12, atol=1e-12)


def test_round_trip_series_node():
    e = ex.Series(PowerSeries([1, 0.5 - 1j, 0, 2]))
    assert np.allclose(ex.evaluate(parse(to_text(e)), 0.3j), ex.evaluate(e, 0.3j))


@settings(max_examples=50)
@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_array_and_scalar_evaluation_agree(x, y):
    e = parse("pow((1+z)/(1-z),0.5)*exp(z)")
    z = complex(x, y)
    if abs(z) >= 0.95:
        return
    arr = ex.evaluate(e, np.array([z, 0.1]))
    assert arr[0] == pytest.approx(ex.evaluate(e, z), rel=1e-14)


def test_deflate_near_and_far():
    # omega = z^2 (1 + z): deflated by 2 gives 1 + z
    d = ex.Deflate(parse("z^2*(1+z)"), 2)
    for z in (0.0, 0.01, 0.3 + 0.2j):
        assert ex.evaluate(d, z) == pytest.approx(1 + z, abs=1e-12)
        assert eval_jet(d, z, 2).coeffs[1] == pytest.approx(1, abs=1e-10)
