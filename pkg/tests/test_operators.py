import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from opcalc.generate import random_operator
from opcalc.operators import (Domain, MonomialOperator, NotRepresentable, OperatorError,
                              Verdict, domain_leq, is_closed, op_adjoint, op_closure,
                              op_compare, op_compose, op_inverse, op_polar, op_properties,
                              op_property, rel_bounded)
from opcalc.radical import RadicalComplex
from opcalc.sequences import GrowthSymbol

from conftest import BI, UNI, op, operator_pairs, operators, sym


def dense(T, idx):
    """Matrix of T on basis vectors with indices in idx, from T e_i = a_{i+k} e_{i+k}."""
    M = np.zeros((len(idx), len(idx)), dtype=complex)
    pos = {n: p for p, n in enumerate(idx)}
    for i in idx:
        j = i + T.shift
        if j in pos and T.symbol.in_space(j):
            M[pos[j], pos[i]] = complex(T.symbol(j))
    return M


def equal(S, T):
    return op_compare(S, T).verdict is Verdict.EQUAL


# -- domains ----------------------------------------------------------------


def test_domain_examples():
    l2 = Domain(UNI, ())
    d = Domain(UNI, (sym("poly(1,0,1; 1)"),))
    assert domain_leq(d, l2).holds
    res = domain_leq(l2, d)
    assert not res.holds
    assert res.vector(6) == [(n, Fraction(1, n + 1)) for n in range(6)]
    assert domain_leq(Domain(UNI, (sym("pow(1,3)"),)), Domain(UNI, (sym("pow(1,1)"),))).holds


def test_domain_space_mismatch():
    with pytest.raises(OperatorError):
        domain_leq(Domain(UNI, ()), Domain(BI, ()))


# -- adjoint ----------------------------------------------------------------


def test_adjoint_examples():
    A = op("diag(poly(1,0,1; 1))")
    assert equal(op_adjoint(A), A)
    S = op("shift(1)")
    Ss = op_adjoint(S)
    assert Ss.shift == -1 and all(Ss.symbol(n) == RadicalComplex(1) for n in range(20))


def test_adjoint_of_weighted_bilateral_shift():
    T = op("diag(exp(2)).shift(1)", BI)
    Ts = op_adjoint(T)
    assert equal(Ts, op("diag(2 * exp(2)).shift(-1)", BI))
    # <T e_i, e_j> = <e_i, T* e_j> for |i|, |j| <= 16: T*'s matrix is T's conjugate transpose
    idx = range(-16, 17)
    assert np.array_equal(dense(Ts, idx), dense(T, idx).conj().T)


@given(operators)
def test_adjoint_matrix_is_conjugate_transpose(T):
    idx = range(0, 20) if T.space is UNI else range(-10, 11)
    A, As = dense(T, idx), dense(op_adjoint(T), idx)
    # entries whose row and column stay inside the window
    margin = abs(T.shift)
    inner = slice(margin, len(idx) - margin) if T.space is BI else slice(0, len(idx) - margin)
    assert np.allclose(As[inner, inner], A.conj().T[inner, inner])


@given(operators)
def test_double_adjoint_is_closure(T):
    assert equal(op_adjoint(op_adjoint(T)), op_closure(T))
    assert equal(op_adjoint(op_closure(T)), op_adjoint(T))


# -- composition ------------------------------------------------------------


def test_example_products(ex1):
    A, B = ex1
    I = MonomialOperator.identity()
    assert equal(op_compose(A, B), I)
    BA = op_compose(B, A)
    assert op_compare(BA, I).verdict is Verdict.PROPER_SUBSET
    assert not BA.is_maximal


def test_shift_times_diagonal():
    b = sym("pow(1,1) * per(2; 1, coeff(0,1,1))")
    S, D = op("shift(1)"), MonomialOperator.diag(b)
    SD = op_compose(S, D)
    assert equal(SD, MonomialOperator.make(b.shift(1), 1))
    idx = range(8)
    # product of the explicit 8x8 matrices, with a margin of one for the shift
    assert np.allclose(dense(SD, idx)[:7, :7], (dense(S, idx) @ dense(D, idx))[:7, :7])


@given(operator_pairs())
def test_diagonal_product_domain(pair):
    A, B = pair
    A, B = MonomialOperator.make(A.symbol, 0), MonomialOperator.make(B.symbol, 0)
    # D(AB) = D(b) & D(ab) for diagonal factors
    expected = Domain(A.space, (B.symbol.abs(), (A.symbol * B.symbol).abs()))
    got = op_compose(A, B).domain()
    assert domain_leq(got, expected).holds and domain_leq(expected, got).holds


@given(operator_pairs())
def test_composition_is_associative(pair):
    A, B = pair
    C = op_adjoint(A)
    assert equal(op_compose(op_compose(A, B), C), op_compose(A, op_compose(B, C)))


def test_space_mismatch():
    with pytest.raises(OperatorError):
        op_compose(op("shift(1)"), op("shift(1)", BI))


# -- closure ----------------------------------------------------------------


def test_closure_examples(ex1):
    A, B = ex1
    assert equal(op_closure(op_compose(B, A)), MonomialOperator.identity())
    T = op("diag(pow(1,2))")
    assert op_closure(T) is T


def test_restricted_diagonal_closes_to_maximal():
    T = op("diag(pow(1,1)) on dom(pow(1,2))")
    assert not is_closed(T)
    assert equal(op_closure(T), op("diag(pow(1,1))"))


def test_truncations_converge_in_graph_norm():
    # x_n = (n+1)^-2 is in D(n+1) but not in D((n+1)^2); its truncations x^(N)
    # lie in the restricted domain, and ||x - x^(N)||_graph -> 0.
    n = np.arange(1, 10**6 + 1, dtype=float)     # n + 1
    x = n ** -2.0
    graph_tail = np.cumsum((x**2 + (n * x) ** 2)[::-1])[::-1]
    dists = [graph_tail[N] for N in (10, 100, 1000, 10**4)]
    assert all(d2 < d1 for d1, d2 in zip(dists, dists[1:]))
    assert dists[-1] < 2e-4
    # the constraint sum diverges: x itself is outside the restricted domain
    partial = np.cumsum((n**2 * x) ** 2)
    assert partial[10**4] > 10**4 and partial[10**5] > 10**5


@given(operators)
def test_closure_is_idempotent_and_closed(T):
    C = op_closure(T)
    assert is_closed(C) and op_closure(C) == C
    assert op_compare(T, C).is_subset()


# -- comparison -------------------------------------------------------------


def test_compare_examples(ex1):
    A, B = ex1
    assert op_compare(op_compose(A, B), MonomialOperator.identity()).verdict is Verdict.EQUAL
    assert op_compare(op_compose(B, A), op_compose(A, B)).verdict is Verdict.PROPER_SUBSET
    assert op_compare(op("diag(pow(1,1))"), op("diag(pow(1,2))")).verdict is Verdict.INCOMPARABLE


@given(operator_pairs())
def test_compare_is_consistent_with_reversal(pair):
    A, B = pair
    flip = {Verdict.EQUAL: Verdict.EQUAL, Verdict.INCOMPARABLE: Verdict.INCOMPARABLE,
            Verdict.PROPER_SUBSET: Verdict.PROPER_SUPERSET,
            Verdict.PROPER_SUPERSET: Verdict.PROPER_SUBSET}
    for S, T in ((A, B), (A, op_closure(A)), (op_compose(A, B), op_closure(op_compose(A, B)))):
        assert op_compare(T, S).verdict is flip[op_compare(S, T).verdict]


# -- properties -------------------------------------------------------------


def test_properties_of_multiplication_operator():
    p = op_properties(op("diag(poly(1,0,1; 1))"))
    assert p.selfadjoint and p.normal and not p.bounded
    assert p.densely_defined and p.closeable and p.closed


def test_properties_of_example_products(ex1):
    A, B = ex1
    assert op_properties(op_compose(A, B)).selfadjoint
    p = op_properties(op_compose(B, A))
    assert not p.closed and p.symmetric and not p.selfadjoint


def test_non_normal_bilateral_shift():
    T = op("diag(per(2; 1, 2)).shift(1)", BI)
    assert not op_properties(T).normal
    # commutator of the explicit truncation, away from the window edges
    idx = range(-16, 17)
    M = dense(T, idx)
    C = M.conj().T @ M - M @ M.conj().T
    assert np.abs(C[2:-2, 2:-2]).max() >= 0.5


def test_kernel_and_codimension():
    S = op("shift(1)")
    assert op_property(S, "kernel_dimension") == 0
    assert op_property(S, "range_codimension") == 1
    assert op_property(op_adjoint(S), "kernel_dimension") == 1
    assert op_property(op("diag(per(2; 1, 0))"), "kernel_dimension") == float("inf")


@given(operators)
def test_lazy_properties_agree_with_record(T):
    p = op_properties(T)
    for name in p.__dataclass_fields__:
        assert getattr(p, name) == op_property(T, name)


@given(operators)
def test_property_implications(T):
    p = op_properties(T)
    if p.selfadjoint:
        assert p.symmetric and p.normal and p.closed
    if p.normal:
        assert p.quasinormal
    if p.unitary:
        assert p.bounded and p.invertible_with_bounded_inverse


# -- polar and relative bounds ----------------------------------------------


def test_polar_examples():
    a = sym("coeff(3,4,1) * pow(1,1)")
    pol = op_polar(MonomialOperator.diag(a))
    assert equal(pol.modulus, MonomialOperator.diag(a.abs()))
    assert equal(pol.partial_isometry, op("diag(coeff(3,4,1) * 1/5)"))
    pol = op_polar(op("shift(1)"))
    assert equal(pol.partial_isometry, op("shift(1)"))
    assert equal(pol.modulus, MonomialOperator.identity())


def test_polar_of_weighted_bilateral_shift():
    T = op("diag(exp(2)).shift(1)", BI)
    pol = op_polar(T)
    assert equal(pol.modulus, op("diag(2 * exp(2))", BI))
    assert equal(pol.partial_isometry, op("shift(1)", BI))
    assert equal(op_compose(pol.partial_isometry, pol.modulus), T)
    idx = range(-16, 17)
    assert np.allclose(dense(pol.partial_isometry, idx) @ dense(pol.modulus, idx), dense(T, idx))


@given(operators)
def test_polar_identities(T):
    pol = op_polar(T)
    C = op_closure(T)
    W, P = pol.partial_isometry, pol.modulus
    assert pol.from_closure == (not is_closed(T))
    assert equal(op_compose(W, P), C)
    assert equal(op_compose(P, P), op_compose(op_adjoint(C), C))
    assert op_property(W, "kernel_dimension") == op_property(P, "kernel_dimension")
    if op_property(C, "dense_range"):
        assert equal(op_compose(op_adjoint(W), C), P)


def test_relative_bound_examples(ex1):
    assert rel_bounded(op("diag(pow(1,1))"), op("diag(pow(1,2))")).holds
    A, B = ex1
    assert rel_bounded(B, op_compose(A, B)).holds
    assert not rel_bounded(op("diag(exp(2))"), op("diag(pow(1,2))")).holds


def test_inverse():
    I = MonomialOperator.identity(BI)
    T = op("diag(exp(2)).shift(1)", BI)
    Ti = op_inverse(T)
    # T T^-1 is the identity on R(T), which is not closed here
    assert op_compare(op_compose(T, Ti), I).verdict is Verdict.PROPER_SUBSET
    assert op_compare(op_compose(Ti, T), I).verdict is Verdict.PROPER_SUBSET
    R = op("diag(per(2; 3, coeff(0,1,2))).shift(2)", BI)
    assert equal(op_compose(R, op_inverse(R)), I) and equal(op_compose(op_inverse(R), R), I)
    with pytest.raises(NotRepresentable):
        op_inverse(op("shift(1)"))
