import random
from fractions import Fraction

from hypothesis import given

from opcalc.generate import random_operator
from opcalc.operators import MonomialOperator, op_adjoint, op_closure, op_properties
from opcalc.states import (CLOSED_STATES, SELFADJOINT_STATES, inverse_class, parse_state,
                           range_class, state_classify)

from conftest import op, operators


def test_range_classes():
    assert range_class(MonomialOperator.identity()) == "I"
    assert range_class(op("diag(poly(1,0,1; -1))")) == "II"
    assert range_class(op("shift(1)")) == "III"


def test_properly_dense_range_witness():
    # y_n = 1/(1+n) is in l2 but y/b = (1+n^2)/(1+n) is not: partial sums of its
    # squares grow without bound, so y is outside the range of diag(1/(1+n^2))
    sums, total = [], Fraction(0)
    for n in range(400):
        total += Fraction(1 + n * n, 1 + n) ** 2
        sums.append(total)
    assert sums[99] > 10**5 and sums[399] > 60 * sums[99]


def test_inverse_classes():
    assert inverse_class(op("diag(poly(1,0,1; 1))")) == 1
    assert inverse_class(op("diag(poly(1,0,1; -1))")) == 2
    assert inverse_class(op("diag(pow(1,1) @ {0: 0})")) == 3


def test_state_examples():
    assert str(state_classify(MonomialOperator.identity()).state) == "I_1 I_1"
    assert str(state_classify(op("diag(poly(1,0,1; -1))")).state) == "II_2 II_2"
    assert state_classify(op("shift(1)")).state == parse_state("III_1 I_3")


def test_non_closed_inputs_are_flagged():
    rep = state_classify(op("diag(pow(1,1)) on dom(pow(1,2))"))
    assert rep.from_closure and str(rep.state) == "I_1 I_1"


def test_five_hundred_random_states():
    rng = random.Random(3)
    for _ in range(500):
        T = random_operator(rng)
        s = state_classify(T).state
        assert s in CLOSED_STATES
        p = op_properties(op_closure(T))
        if p.selfadjoint:
            assert s in SELFADJOINT_STATES
        if p.unitary:
            assert s == parse_state("I1I1")


@given(operators)
def test_adjoint_symmetry(T):
    s = state_classify(T).state
    t = state_classify(op_adjoint(T)).state
    assert (t.t_range, t.t_inverse) == (s.tstar_range, s.tstar_inverse)
    assert (t.tstar_range, t.tstar_inverse) == (s.t_range, s.t_inverse)


def test_zero_in_continuous_spectrum():
    T = op("diag(poly(1,0,1; -1))")
    p = op_properties(T)
    s = state_classify(T).state
    # injective with properly dense range
    assert p.injective and not p.invertible_with_bounded_inverse
    assert s.t_range == "II" and s.t_inverse == 2
