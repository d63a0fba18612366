import pytest
import sympy
from hypothesis import given, settings, strategies as st

from asanuma.errors import ExponentOverflow, MissingCoordinate, NotDivisible, PolySyntaxError, UnknownVariable
from asanuma.field import GF, PrimeField
from asanuma.poly import (
    Polynomial,
    evaluate,
    exact_divide,
    format_poly,
    mul,
    parse_poly,
    partial_derivative,
)

V4 = ("x", "y", "z", "t")
V6 = ("x", "y", "z", "t", "U", "V")


def P(text, p=2, vars=V4):
    return parse_poly(text, vars, PrimeField(p))


def to_sympy(f: Polynomial):
    syms = sympy.symbols(f.vars)
    expr = sum(
        (c * sympy.Mul(*[s**k for s, k in zip(syms, e)]) for e, c in f.terms.items()),
        sympy.Integer(0),
    )
    return sympy.Poly(expr, *syms, modulus=f.field.p)


def from_sympy(poly, vars, p):
    terms = {tuple(e): int(c) % p for e, c in poly.terms()}
    return Polynomial(PrimeField(p), vars, terms)


def test_parse_examples():
    f = P("x^2*y + z^4 + t + t^6")
    assert len(f) == 4
    assert P("0").is_zero()
    assert format_poly(P("3*x + 5")) == "x + 1"


def test_print_order_and_signs():
    assert format_poly(P("t^6 + z^4 + x^2*y")) == "x^2*y + z^4 + t^6"
    assert format_poly(P("2*x - 1", p=5)) == "2*x + 4"
    assert format_poly(P("0")) == "0"


def test_parse_errors_carry_position():
    with pytest.raises(PolySyntaxError) as exc:
        P("x^2 + + y")
    assert exc.value.pos == 6
    with pytest.raises(UnknownVariable):
        P("x + w")
    with pytest.raises(PolySyntaxError):
        P("x^")


def test_parse_unary_minus_and_whitespace():
    assert P("-x^2 - -y", p=3) == P("2*x^2+y", p=3)
    assert P("  x *  y^ 2 ") == P("x*y^2")


def test_parentheses_are_outside_the_grammar():
    with pytest.raises(PolySyntaxError) as exc:
        P("-(x + y)^2")
    assert exc.value.pos == 1


def test_mul_examples():
    f = P("z^2 + t^3 + 1")
    assert mul(f, P("1")) == f
    g = P("t + y*U", vars=V6)
    assert mul(g, g) == P("t^2 + y^2*U^2", vars=V6)
    h = P("z + t", p=3)
    assert mul(h, h) == P("z^2 + 2*z*t + t^2", p=3)


def test_exact_divide_examples():
    f = P("t^4*y^2*U^2 + t^2*y^4*U^4 + y^6*U^6", vars=V6)
    assert exact_divide(f, P("y", vars=V6)) == P("t^4*y*U^2 + t^2*y^3*U^4 + y^5*U^6", vars=V6)
    assert exact_divide(P("0"), P("y")).is_zero()
    with pytest.raises(NotDivisible):
        exact_divide(P("t + 1"), P("y"))


def test_exact_divide_matches_brute_expansion():
    # (t + yU)^6 - t^6 over F_2, expanded by repeated multiplication
    g = P("t + y*U", vars=V6)
    acc = P("1", vars=V6)
    for _ in range(6):
        acc = acc * g
    diff = acc - P("t^6", vars=V6)
    q = exact_divide(diff, P("y", vars=V6))
    assert q * P("y", vars=V6) == diff


def test_partial_derivative_examples():
    assert partial_derivative(P("x^2*y + z^4 + t + t^6"), "t") == P("1")
    assert partial_derivative(P("z^4"), "z").is_zero()
    assert partial_derivative(P("t^3"), "t") == P("t^2")


def test_evaluate_examples():
    assert evaluate(P("z^4 + t + t^6"), {"z": 0, "t": 1}) == 0
    assert evaluate(P("1"), {}) == 1
    assert evaluate(P("x^2*y + z^4 + t + t^6"), {"x": 1, "y": 1, "z": 0, "t": 1}) == 1


def test_evaluate_over_extension():
    F4 = GF(2, 2)
    w = F4.gen
    assert evaluate(P("z^2 + z + 1"), {"z": w}) == F4.zero


def test_evaluate_missing_coordinate():
    with pytest.raises(MissingCoordinate):
        evaluate(P("x + y"), {"x": 1})
    # unused variables need no coordinate
    assert evaluate(P("x"), {"x": 1}) == 1


def test_exponent_overflow():
    with pytest.raises(ExponentOverflow):
        P("x^1000000") ** 10**6


# -- property tests ----------------------------------------------------------------

terms_st = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * 4), st.integers(1, 4), max_size=5
)


def poly_from(terms, p):
    return Polynomial(PrimeField(p), V4, {e: c % p for e, c in terms.items()})


@settings(max_examples=150, deadline=None)
@given(terms_st, terms_st, st.sampled_from([2, 3, 5]))
def test_product_matches_sympy(a, b, p):
    f, g = poly_from(a, p), poly_from(b, p)
    want = from_sympy(to_sympy(f) * to_sympy(g), V4, p) if f and g else Polynomial.zero(f.field, V4)
    assert f * g == want


@settings(max_examples=100, deadline=None)
@given(terms_st, terms_st, terms_st, st.sampled_from([2, 3]))
def test_ring_axioms(a, b, c, p):
    f, g, h = poly_from(a, p), poly_from(b, p), poly_from(c, p)
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Polynomial.zero(f.field, V4)


@settings(max_examples=100, deadline=None)
@given(terms_st, terms_st, st.sampled_from([2, 3, 5]))
def test_freshmans_dream(a, b, p):
    f, g = poly_from(a, p), poly_from(b, p)
    assert (f + g) ** p == f**p + g**p


@settings(max_examples=200, deadline=None)
@given(terms_st, st.sampled_from([2, 3, 7]))
def test_print_parse_round_trip(a, p):
    f = poly_from(a, p)
    assert parse_poly(format_poly(f), V4, PrimeField(p)) == f


@settings(max_examples=100, deadline=None)
@given(terms_st, st.sampled_from(V4), st.sampled_from([2, 3]))
def test_derivative_matches_sympy(a, v, p):
    f = poly_from(a, p)
    got = partial_derivative(f, v)
    if f.is_zero():
        assert got.is_zero()
        return
    want = to_sympy(f).diff(sympy.Symbol(v))
    assert got == from_sympy(want, V4, p)
