import math
import random
from fractions import Fraction

import pytest
from hypothesis import given

from opcalc.dsl import parse_symbol
from opcalc.generate import random_symbol
from opcalc.radical import RadicalComplex
from opcalc.sequences import (GrowthSymbol, OverrideOverflow, Space, SymbolError, classify,
                              growth_leq, same_values)

from conftest import BI, UNI, sym, symbol_pairs, symbols

ONE_PLUS_N2 = "poly(1,0,1; 1)"


def indices(space, lo=-50, hi=50):
    return range(0, hi + 1) if space is UNI else range(lo, hi + 1)


# -- evaluation -------------------------------------------------------------


def test_one_plus_n_squared_values():
    a = sym(ONE_PLUS_N2)
    assert a(2) == RadicalComplex(5)
    assert all(a(n) == RadicalComplex(1 + n * n) for n in range(200))


def test_constant_and_override():
    assert all(sym("1")(n) == RadicalComplex(1) for n in range(20))
    a = sym("pow(1,1) @ {3: 0}")
    assert a(3) == RadicalComplex(0)
    assert a(4) == RadicalComplex(5)


def test_index_outside_space():
    with pytest.raises(IndexError):
        sym("1")(-1)


def test_override_cap():
    with pytest.raises(OverrideOverflow):
        GrowthSymbol.build(UNI, overrides={n: 2 for n in range(65)})


def test_bilateral_rejects_polynomials():
    with pytest.raises(SymbolError):
        GrowthSymbol.build(BI, poly=(((1, 1), 1),))


# -- combination ------------------------------------------------------------


def test_product_with_reciprocal_is_one():
    a = sym(ONE_PLUS_N2)
    b = sym("poly(1,0,1; -1)")
    assert same_values(a * b, GrowthSymbol.constant(1))
    assert same_values(a.reciprocal(), b)


def test_shift_of_exponential():
    a = sym("exp(2)", BI)
    shifted = a.shift(1)
    assert all(shifted(n) == RadicalComplex(Fraction(2) ** (n - 1)) for n in range(-10, 11))
    assert same_values(shifted, sym("1/2 * exp(2)", BI))


def test_abs_of_complex_coefficient():
    a = sym("coeff(3,4,1) * exp(2)", BI)
    assert same_values(a.abs(), sym("5 * exp(2)", BI))


def test_reciprocal_of_symbol_with_zeros():
    with pytest.raises(SymbolError):
        sym("per(2; 1, 0)").reciprocal()


def test_unilateral_shift_moves_poly_roots_into_overrides():
    a = sym("pow(1,-1)")            # 1/(n+1)
    s = a.shift(1)                   # n -> 1/n, undefined at 0
    assert s(0).is_zero()
    assert all(s(n) == RadicalComplex(Fraction(1, n)) for n in range(1, 30))


def test_combinations_are_pointwise_on_1000_pairs():
    rng = random.Random(11)
    checked = 0
    while checked < 1000:
        space = rng.choice([UNI, BI])
        a, b = random_symbol(rng, space), random_symbol(rng, space)
        j = rng.randint(-3, 3)
        n = rng.randint(0, 40) if space is UNI else rng.randint(-40, 40)
        assert (a * b)(n) == a(n) * b(n)
        assert a.conj()(n) == a(n).conjugate()
        assert a.abs()(n) == a(n).modulus()
        if a.in_space(n - j):
            assert a.shift(j)(n) == a(n - j)
        if a.zero_set().is_empty():
            assert a.reciprocal()(n) == a(n).inverse()
        checked += 1


# -- growth -----------------------------------------------------------------


def test_growth_examples():
    assert growth_leq(sym("pow(1,1)"), sym("pow(1,2)")).holds
    assert not growth_leq(sym("exp(2)"), sym("pow(1,100)")).holds


def test_growth_witness_along_odd_indices():
    a, b = sym("exp(2)"), sym("per(2; 1, 0) * exp(2)")
    res = growth_leq(a, b)
    assert not res.holds
    # independent check: the ratio |a_n| / (1 + |b_n|) grows without bound on odd n
    ratios = [Fraction(2) ** n / (1 + (0 if n % 2 else Fraction(2) ** n)) for n in range(1, 42, 2)]
    assert all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:]))
    assert ratios[-1] > 10 ** 11
    assert res.witness.modulus == 2 and res.witness.residue == 1


@given(symbols)
def test_growth_is_reflexive(a):
    assert growth_leq(a, a).holds


def test_growth_is_transitive_on_500_triples():
    rng = random.Random(5)
    for _ in range(500):
        space = rng.choice([UNI, BI])
        a, b, c = (random_symbol(rng, space) for _ in range(3))
        if growth_leq(a, b).holds and growth_leq(b, c).holds:
            assert growth_leq(a, c).holds


def _ratio_at_least(a, b, n, k) -> bool:
    num = math.sqrt(float(a(n).abs2()))
    den = 1 + math.sqrt(float(b(n).abs2()))
    return num >= k * den * (1 - 1e-12)


@given(symbol_pairs())
def test_false_growth_comes_with_a_witness(pair):
    a, b = pair
    res = growth_leq(a, b)
    if res.holds:
        return
    ns = res.witness.subsequence(20)
    assert all(_ratio_at_least(a, b, n, k) for k, n in enumerate(ns, start=1))


# -- classification ---------------------------------------------------------


def test_classify_examples():
    inv = classify(sym("poly(1,0,1; -1)"))
    assert inv.bounded and not inv.inf_positive and inv.zero_set.is_empty()
    grow = classify(sym(ONE_PLUS_N2))
    assert not grow.bounded and grow.inf_positive and grow.infimum == RadicalComplex(1)
    per = classify(sym("per(2; 1, 0)"))
    assert per.bounded and not per.zero_set.is_empty()
    assert all((n in per.zero_set) == (n % 2 == 1) for n in range(40))


@given(symbols)
def test_zero_set_is_exact(a):
    zs = a.zero_set()
    for n in indices(a.space, -30, 30):
        assert (n in zs) == a(n).is_zero()


# -- literals ---------------------------------------------------------------


@given(symbols)
def test_literal_round_trip(a):
    back = parse_symbol(str(a), a.space)
    assert str(back) == str(a)
    assert all(back(n) == a(n) for n in indices(a.space, hi=100 if a.space is UNI else 50))
