import numpy as np
import pytest
from hypothesis import given

from opcalc.operators import (MonomialOperator, op_adjoint, op_closure, op_compose,
                              op_inverse, op_polar)
from opcalc.oracle import (WindowError, matrix_of, oracle_crosscheck, residuals,
                           svd_polar_deviation, symbolic_matrix)
from opcalc.radical import RadicalComplex
from opcalc.terms import Adj, Atom, Comp

from conftest import BI, UNI, op, operator_pairs, operators


def test_matrix_of_examples():
    M = matrix_of(op("diag(poly(1,0,1; 1))"), 3)
    assert np.array_equal(M.dense(), np.diag([1, 2, 5]))
    S = matrix_of(op("shift(1)"), 3).dense()
    assert np.array_equal(S, np.eye(3, k=-1))


@given(operators)
def test_adjoint_matrix_is_conjugate_transpose(T):
    M = matrix_of(T, 12)
    A = matrix_of(Adj(Atom("T")), 12, env={"T": T})
    assert np.array_equal(A.dense(), M.dense().conj().T)


def test_window_limits():
    with pytest.raises(WindowError):
        matrix_of(op("shift(3)"), 3)
    with pytest.raises(WindowError):
        matrix_of(op("shift(1)"), 129, "exact")


def test_exact_entries_print_as_triples():
    M = matrix_of(op("diag(coeff(1,1,2))"), 2)
    assert str(M.entry(0, 0)) == "(1,1,2)"


def test_residual_examples():
    r = residuals(op("diag(poly(1,0,1; 1))"), 32)
    assert r.selfadjointness.absolute == 0
    r = residuals(op("diag(per(2; 1, 2)).shift(1)", BI), 32)
    assert r.normality.absolute >= 0.5
    r = residuals(op("diag(exp(2)).shift(1)", BI), 16)
    assert r.polar.relative <= 1e-9


def test_polar_in_exact_mode():
    T = op("diag(exp(2)).shift(1)", BI)
    pol = op_polar(T)
    assert oracle_crosscheck("polar", (T,), (pol.partial_isometry, pol.modulus), 16)


def test_crosscheck_examples(ex1):
    A, B = ex1
    assert oracle_crosscheck("compose", (A, B), MonomialOperator.identity(), 16)
    D = op("diag(coeff(0,1,1) * pow(1,1))")
    assert oracle_crosscheck("adjoint", (D,), op("diag(coeff(0,-1,1) * pow(1,1))"), 8)


def test_crosscheck_catches_a_missing_shift():
    b = op("diag(pow(1,1))").symbol
    S, D = op("shift(1)"), MonomialOperator.diag(b)
    wrong = MonomialOperator.make(b, 1)          # should be shift(b, 1)
    res = oracle_crosscheck("compose", (S, D), wrong, 8)
    assert not res.passed
    assert res.mismatch[:2] == (1, 0)


@given(operator_pairs())
def test_float_and_exact_agree(pair):
    A, B = pair
    env = {"A": A, "B": B}
    expr = Comp(Atom("A"), Atom("B"))
    ex = matrix_of(expr, 16, "exact", env)
    fl = matrix_of(expr, 16, "float", env)
    idx = ex.window.indices
    for j in idx:
        for i in idx:
            u = complex(ex.entry(j, i))
            if abs(u) <= 1e6:
                assert abs(u - fl.entry(j, i)) <= 1e-12 * max(1.0, abs(u))


@pytest.mark.parametrize("text, space", [
    ("diag(per(2; 1, coeff(0,2,1)) * pow(1,-1)).shift(1)", UNI),
    ("diag(per(3; 1, 2, coeff(0,1,1)) @ {0: 5}).shift(1)", BI),
    ("diag(pow(1,1/2) * pow(2,-1/2)).shift(2)", UNI),
])
def test_svd_polar_matches_symbolic_factors(text, space):
    # for monomials the interior of the truncated SVD polar factors is already
    # exact, so the deviation sits at rounding level for every window size
    devs = [svd_polar_deviation(op(text, space), n) for n in (16, 32, 64, 128)]
    assert max(devs) <= 1e-12
