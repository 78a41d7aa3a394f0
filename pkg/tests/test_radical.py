from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from opcalc.radical import ONE, ZERO, RadicalComplex, conjugate, equals, modulus, product

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
radicands = st.fractions(min_value=Fraction(1, 4), max_value=12, max_denominator=4)
values = st.builds(RadicalComplex, rationals, rationals, radicands)


def to_sympy(z: RadicalComplex):
    return (sympy.Rational(z.x) + sympy.I * sympy.Rational(z.y)) * sympy.sqrt(z.s)


def same(expr, z: RadicalComplex) -> bool:
    return sympy.simplify(sympy.expand(expr - to_sympy(z))) == 0


def test_product_of_conjugate_pair():
    assert product(RadicalComplex(1, 1), RadicalComplex(1, -1)) == RadicalComplex(2)


def test_modulus_example():
    assert modulus(RadicalComplex(1, 1, 2)) == RadicalComplex(2, 0, 1)


def test_zero_annihilates():
    z = RadicalComplex(3, -2, 7)
    assert product(RadicalComplex(0), z) == ZERO
    assert ZERO.s == 1 and ZERO.x == 0 and ZERO.y == 0


def test_canonical_form_extracts_squares():
    z = RadicalComplex(1, 0, 12)       # sqrt(12) = 2 sqrt(3)
    assert (z.x, z.y, z.s) == (2, 0, 3)
    w = RadicalComplex(1, 0, Fraction(1, 2))   # sqrt(1/2) = sqrt(2)/2
    assert (w.x, w.s) == (Fraction(1, 2), 2)


@given(values, values)
def test_product_matches_sympy(a, b):
    assert same(to_sympy(a) * to_sympy(b), product(a, b))


@given(values)
def test_conjugate_and_modulus_match_sympy(a):
    assert same(sympy.conjugate(to_sympy(a)), conjugate(a))
    m = modulus(a)
    assert m.y == 0 and m.x >= 0
    assert same(sympy.Abs(to_sympy(a)), m)


@given(values, values)
def test_modulus_is_multiplicative(a, b):
    assert modulus(product(a, b)) == product(modulus(a), modulus(b))


@given(values, values)
def test_equality_is_value_equality(a, b):
    assert equals(a, b) == (sympy.simplify(to_sympy(a) - to_sympy(b)) == 0)
    assert equals(a, a * ONE)
