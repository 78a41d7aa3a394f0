"""Monomial operators (diagonal times shift power) with explicit domains.

An operator T = (a, k, constraints) acts on l2(N) or l2(Z) by

    (T x)_n = a_n * x_{n-k}      (coordinates with n - k outside the index set are absent)

on the effective domain

    D(T) = {x : sum |w_n x_n|^2 < inf}  intersected with  {x : sum |c_n x_n|^2 < inf}

where w = shift(a, -k) is the pulled-back symbol and the c are the extra
domain constraints.  w is the weight of the maximal domain.

Closure lemma.  For x in the maximal domain, the truncations x^(N) (first N
coordinates kept) are finitely supported, so they lie in every constraint
domain; x^(N) -> x and T x^(N) -> T x in l2 because the tail sums of
|x_n|^2 and |w_n x_n|^2 vanish.  The maximal operator is closed (a weighted
shift with its natural domain), hence the closure of any restriction is the
maximal operator with the same symbol and shift.  This makes closure, adjoint
and closedness decidable; tests/test_closure_lemma.py checks the convergence
numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .radical import ONE, RadicalComplex
from .sequences import (
    GrowthResult,
    GrowthSymbol,
    GrowthWitness,
    Space,
    SymbolError,
    classify,
    is_bounded,
    dominated,
    same_values,
)


class OperatorError(ValueError):
    pass


class NotRepresentable(OperatorError):
    """The requested operator leaves the densely defined monomial class."""


def _useful(constraints: Sequence[GrowthSymbol]) -> list[GrowthSymbol]:
    """Drop constraints that are bounded (they define all of l2)."""
    return [c for c in constraints if not is_bounded(c)]


# -- domains ----------------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    """{x in l2 : sum |c_n x_n|^2 < inf for each constraint c}."""

    space: Space
    constraints: tuple

    def describe(self) -> str:
        if not self.constraints:
            return "l2"
        return " & ".join(f"dom({c})" for c in self.constraints)


@dataclass(frozen=True)
class DomainInclusion:
    holds: bool
    violating: GrowthSymbol | None = None
    witness: GrowthWitness | None = None

    def __bool__(self) -> bool:
        return self.holds

    def vector(self, count: int = 8) -> list[tuple[int, Fraction]]:
        """Entries of a vector in the smaller domain but outside the larger one."""
        if self.witness is None:
            raise ValueError("inclusion holds; there is no witness vector")
        return self.witness.vector(count)


def domain_leq(d1: Domain, d2: Domain) -> DomainInclusion:
    """Decide D1 <= D2 by comparing each constraint of D2 with the max of D1's."""
    if d1.space is not d2.space:
        raise OperatorError("domains live on different spaces")
    dominators = _useful(d1.constraints)
    for c in _useful(d2.constraints):
        res: GrowthResult = dominated(c, dominators)
        if not res.holds:
            return DomainInclusion(False, c, res.witness)
    return DomainInclusion(True)


def normalize_constraints(required: Sequence[GrowthSymbol],
                          extra: Sequence[GrowthSymbol]) -> tuple:
    """Moduli of `extra`, minus any dominated by `required` and the others kept."""
    cands = []
    for c in extra:
        c = c.abs()
        if not is_bounded(c) and c not in cands:
            cands.append(c)
    base = _useful([r.abs() for r in required])
    kept = list(cands)
    for c in cands:
        others = [o for o in kept if o is not c]
        if dominated(c, base + others).holds:
            kept.remove(c)
    return tuple(sorted(kept, key=str))


# -- operators --------------------------------------------------------------


class Verdict(str, Enum):
    EQUAL = "equal"
    PROPER_SUBSET = "proper-subset"
    PROPER_SUPERSET = "proper-superset"
    INCOMPARABLE = "incomparable"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    witness: DomainInclusion | None = None
    reason: str = ""

    def is_subset(self) -> bool:
        return self.verdict in (Verdict.EQUAL, Verdict.PROPER_SUBSET)


@dataclass(frozen=True)
class MonomialOperator:
    space: Space
    symbol: GrowthSymbol
    shift: int
    constraints: tuple = ()

    @classmethod
    def make(cls, symbol: GrowthSymbol, shift: int = 0,
             constraints: Sequence[GrowthSymbol] = ()) -> "MonomialOperator":
        """Canonical construction: dead indices zeroed, domain constraints normalized."""
        space = symbol.space
        shift = int(shift)
        if space is Space.UNILATERAL and shift > 0:
            # a_n for n < k multiplies absent coordinates
            dead = {n: 0 for n in range(shift) if not symbol(n).is_zero()}
            if dead:
                over = dict(symbol.overrides)
                over.update(dead)
                symbol = GrowthSymbol.build(space, symbol.coeff, symbol.residues,
                                            symbol.poly, symbol.expbase, over)
        if symbol.is_zero_symbol():
            shift = 0
        weight = symbol.shift(-shift)
        for c in constraints:
            if c.space is not space:
                raise OperatorError("domain constraint on a different space")
        return cls(space, symbol, shift, normalize_constraints([weight], constraints))

    @classmethod
    def diag(cls, symbol: GrowthSymbol) -> "MonomialOperator":
        return cls.make(symbol, 0)

    @classmethod
    def identity(cls, space: Space | str = Space.UNILATERAL) -> "MonomialOperator":
        return cls.make(GrowthSymbol.constant(1, space), 0)

    @classmethod
    def shift_op(cls, k: int, space: Space | str = Space.UNILATERAL) -> "MonomialOperator":
        return cls.make(GrowthSymbol.constant(1, space), k)

    def restrict(self, *constraints: GrowthSymbol) -> "MonomialOperator":
        return MonomialOperator.make(self.symbol, self.shift, self.constraints + constraints)

    # -- structure ---------------------------------------------------------

    @property
    def weight(self) -> GrowthSymbol:
        """Pulled-back symbol: ||T x||^2 = sum |weight_n x_n|^2."""
        return self.symbol.shift(-self.shift)

    @property
    def is_maximal(self) -> bool:
        return not self.constraints

    def domain(self) -> Domain:
        return Domain(self.space, (self.weight.abs(),) + self.constraints)

    def maximal_domain(self) -> Domain:
        return Domain(self.space, (self.weight.abs(),))

    def matrix_element(self, j: int, i: int) -> RadicalComplex:
        """<T e_i, e_j>; basis vectors lie in every domain."""
        if j - i != self.shift or not self.symbol.in_space(j) or not self.symbol.in_space(i):
            return RadicalComplex(0)
        return self.symbol(j)

    def __str__(self) -> str:
        return operator_literal(self)


def operator_literal(T: MonomialOperator) -> str:
    text = f"diag({T.symbol})"
    if T.shift:
        text += f".shift({T.shift})"
    if T.constraints:
        text += " on " + " & ".join(f"dom({c})" for c in T.constraints)
    return text


def _same(A: MonomialOperator, B: MonomialOperator) -> None:
    if A.space is not B.space:
        raise OperatorError("operators act on different spaces")


# -- the operations ---------------------------------------------------------


def op_closure(T: MonomialOperator) -> MonomialOperator:
    """Minimal closed extension: the maximal operator with T's symbol and shift."""
    if T.is_maximal:
        return T
    return MonomialOperator(T.space, T.symbol, T.shift, ())


def op_adjoint(T: MonomialOperator) -> MonomialOperator:
    """(a, k)* = (conj(shift(a, -k)), -k) on its maximal domain.

    The adjoint of T equals the adjoint of its closure, so the domain
    constraints of T play no role.
    """
    return MonomialOperator.make(T.weight.conj(), -T.shift)


def op_compose(A: MonomialOperator, B: MonomialOperator) -> MonomialOperator:
    """A B on D(AB) = {x in D(B) : B x in D(A)}."""
    _same(A, B)
    symbol = A.symbol * B.symbol.shift(A.shift)
    shift = A.shift + B.shift
    b = B.symbol
    # B x in D(c)  iff  x in D(shift(c * b, -k_B))
    pulled = [(c * b).shift(-B.shift) for c in (A.weight,) + A.constraints]
    constraints = list(B.constraints) + [B.weight] + pulled
    return MonomialOperator.make(symbol, shift, constraints)


def op_inverse(T: MonomialOperator) -> MonomialOperator:
    """Inverse of an injective operator with dense range, defined on R(T)."""
    w = T.weight
    if not w.zero_set().is_empty():
        raise NotRepresentable("operator is not injective")
    if not T.symbol.zero_set().is_empty():
        raise NotRepresentable("inverse is not densely defined (range not dense)")
    # T^{-1} y = x with x_m = y_{m+k} / w_m: shift -k, symbol 1/w
    inv_w = w.reciprocal()
    symbol = inv_w
    # y in R(T) iff x in D(T): pull each constraint of T back through T^{-1}
    pulled = [(c * inv_w).shift(T.shift) for c in T.constraints]
    return MonomialOperator.make(symbol, -T.shift, pulled)


def op_compare(S: MonomialOperator, T: MonomialOperator) -> Comparison:
    """Inclusion verdict between two operators.

    Every domain contains the basis vectors, so S <= T forces equal matrix
    elements: equal shifts and pointwise equal symbols.  The domains then
    decide the verdict.
    """
    _same(S, T)
    if S.shift != T.shift or not same_values(S.symbol, T.symbol):
        return Comparison(Verdict.INCOMPARABLE, None, "symbols or shifts differ")
    st = domain_leq(S.domain(), T.domain())
    ts = domain_leq(T.domain(), S.domain())
    if st.holds and ts.holds:
        return Comparison(Verdict.EQUAL)
    if st.holds:
        return Comparison(Verdict.PROPER_SUBSET, ts, "D(T) is not contained in D(S)")
    if ts.holds:
        return Comparison(Verdict.PROPER_SUPERSET, st, "D(S) is not contained in D(T)")
    return Comparison(Verdict.INCOMPARABLE, st, "domains are incomparable")


def is_closed(T: MonomialOperator) -> bool:
    return domain_leq(T.maximal_domain(), T.domain()).holds


def range_is_closed(T: MonomialOperator) -> bool:
    """R(T) is closed iff T is bounded below off its kernel and the domain
    constraints are harmless on the support of the weight."""
    if T.symbol.is_zero_symbol():
        return True
    w = T.weight
    if not classify(w).inf_positive:
        return False
    support = w.phase().abs()
    masked = Domain(T.space, tuple(c * support for c in T.constraints))
    return domain_leq(T.maximal_domain(), masked).holds


# -- properties -------------------------------------------------------------


@dataclass(frozen=True)
class Properties:
    densely_defined: bool
    closeable: bool
    closed: bool
    bounded: bool
    symmetric: bool
    selfadjoint: bool
    normal: bool
    quasinormal: bool
    unitary: bool
    invertible_with_bounded_inverse: bool
    injective_unbounded_inverse: bool
    injective: bool
    dense_range: bool
    closed_range: bool
    kernel_dimension: float
    range_codimension: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _is_normal(T: MonomialOperator) -> bool:
    Ts = op_adjoint(T)
    return is_closed(T) and op_compare(op_compose(Ts, T), op_compose(T, Ts)).verdict is Verdict.EQUAL


def _is_quasinormal(T: MonomialOperator) -> bool:
    # quasinormality is a property of closed operators, like normality
    if not is_closed(T):
        return False
    TsT = op_compose(op_adjoint(T), T)
    return op_compare(op_compose(T, TsT), op_compose(TsT, T)).verdict is Verdict.EQUAL


def _kernel(T: MonomialOperator) -> float:
    return classify(T.weight).zero_set.count()


def _codim(T: MonomialOperator) -> float:
    return classify(T.symbol).zero_set.count()


def _is_unitary(T: MonomialOperator) -> bool:
    unimodular = same_values(T.symbol.abs(), GrowthSymbol.constant(1, T.space))
    return unimodular and is_closed(T) and _kernel(T) == 0 and _codim(T) == 0


def _is_invertible(T: MonomialOperator) -> bool:
    return (is_closed(T) and _kernel(T) == 0 and _codim(T) == 0
            and classify(T.weight).inf_positive)


PROPERTY_TESTS = {
    "densely_defined": lambda T: True,
    "closeable": lambda T: True,
    "closed": is_closed,
    "bounded": lambda T: classify(T.weight).bounded,
    "symmetric": lambda T: op_compare(T, op_adjoint(T)).is_subset(),
    "selfadjoint": lambda T: op_compare(T, op_adjoint(T)).verdict is Verdict.EQUAL,
    "normal": _is_normal,
    "quasinormal": _is_quasinormal,
    "unitary": _is_unitary,
    "invertible_with_bounded_inverse": _is_invertible,
    "injective_unbounded_inverse": lambda T: (_kernel(T) == 0
                                             and not classify(T.weight).inf_positive),
    "injective": lambda T: _kernel(T) == 0,
    "dense_range": lambda T: _codim(T) == 0,
    "closed_range": range_is_closed,
    "kernel_dimension": _kernel,
    "range_codimension": _codim,
}


def op_property(T: MonomialOperator, name: str):
    """A single entry of op_properties, computed on its own."""
    return PROPERTY_TESTS[name](T)


def op_properties(T: MonomialOperator) -> Properties:
    return Properties(**{name: test(T) for name, test in PROPERTY_TESTS.items()})


# -- polar decomposition ----------------------------------------------------


@dataclass(frozen=True)
class Polar:
    partial_isometry: MonomialOperator
    modulus: MonomialOperator
    from_closure: bool


def op_polar(T: MonomialOperator) -> Polar:
    """T = W |T| with |T| = diag(|shift(a, -k)|) and W = (a / |a|, k)."""
    flagged = not is_closed(T)
    if flagged:
        T = op_closure(T)
    absT = MonomialOperator.make(T.weight.abs(), 0)
    W = MonomialOperator.make(T.symbol.phase(), T.shift)
    return Polar(W, absT, flagged)


# -- relative boundedness ---------------------------------------------------


@dataclass(frozen=True)
class RelativeBound:
    holds: bool
    witness: DomainInclusion | GrowthResult | None = None

    def __bool__(self) -> bool:
        return self.holds


def rel_bounded(B: MonomialOperator, T: MonomialOperator) -> RelativeBound:
    """Is B T-bounded: D(T) <= D(B) and ||Bx|| <= a||x|| + b||Tx|| on D(T)?

    For monomials the norm bound holds iff |w_B| <= C (1 + |w_T|) on the
    weights; for closed T this is implied by the domain inclusion.
    """
    _same(B, T)
    inc = domain_leq(T.domain(), B.domain())
    if not inc.holds:
        return RelativeBound(False, inc)
    growth = dominated(B.weight, [T.weight])
    if not growth.holds:
        return RelativeBound(False, growth)
    return RelativeBound(True)


def op_zero(space: Space | str = Space.UNILATERAL) -> MonomialOperator:
    return MonomialOperator.make(GrowthSymbol.constant(0, space), 0)


__all__ = [
    "Comparison", "Domain", "DomainInclusion", "MonomialOperator", "NotRepresentable",
    "OperatorError", "Polar", "Properties", "RelativeBound", "SymbolError", "Verdict",
    "domain_leq", "is_closed", "range_is_closed", "op_adjoint", "op_closure", "op_compare", "op_compose",
    "op_inverse", "op_polar", "op_properties", "op_property", "op_zero", "rel_bounded", "ONE",
]
