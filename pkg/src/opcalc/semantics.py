"""In-model truth of facts: every atom is bound to a monomial operator.

A fact evaluates to True, False or None.  None means the model cannot
decide it: `permutes` is opaque, and an inverse that leaves the densely
defined monomial class has no in-model value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .facts import Fact
from .operators import (
    MonomialOperator,
    NotRepresentable,
    OperatorError,
    Verdict,
    domain_leq,
    op_compare,
    op_polar,
    op_property,
    rel_bounded,
)
from .terms import Term, UnboundName, evaluate


@dataclass(frozen=True)
class Truth:
    value: bool | None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.value is True


def _unary(pred: str, prop) -> bool:
    """`prop(name)` looks up one entry of op_properties."""
    if pred == "bounded":
        # a member of B(H): closed with bounded weight
        return prop("closed") and prop("bounded")
    if pred == "invertible_bounded":
        return prop("invertible_with_bounded_inverse")
    if pred == "finite_kernel":
        return prop("kernel_dimension") != float("inf")
    if pred == "finite_codim_range":
        return prop("closed_range") and prop("range_codimension") != float("inf")
    return bool(prop(pred))


class Model:
    """Evaluates terms and facts under one binding of atoms, memoizing terms."""

    def __init__(self, env: Mapping[str, MonomialOperator]):
        self.env = dict(env)
        self._ops: dict = {}
        self._props: dict = {}

    def op(self, t: Term) -> MonomialOperator:
        if t not in self._ops:
            try:
                self._ops[t] = evaluate(t, self.env)
            except NotRepresentable as exc:
                self._ops[t] = exc
        got = self._ops[t]
        if isinstance(got, Exception):
            raise got
        return got

    def property(self, t: Term, name: str):
        key = (t, name)
        if key not in self._props:
            self._props[key] = op_property(self.op(t), name)
        return self._props[key]

    def compare(self, s: Term, t: Term):
        return op_compare(self.op(s), self.op(t))

    def truth(self, fact: Fact) -> Truth:
        try:
            return self._truth(fact)
        except NotRepresentable as exc:
            return Truth(None, f"not representable in the model: {exc}")
        except UnboundName as exc:
            return Truth(None, f"atom {exc.args[0]} is not instantiated")
        except OperatorError as exc:
            return Truth(None, str(exc))

    def _truth(self, fact: Fact) -> Truth:
        pred, args = fact.pred, fact.args
        if pred == "permutes":
            return Truth(None, "permutability is opaque in the model")
        if len(args) == 1:
            return Truth(_unary(pred, lambda name: self.property(args[0], name)))
        if pred in ("subset", "equal"):
            cmp = op_compare(self.op(args[0]), self.op(args[1]))
            ok = cmp.is_subset() if pred == "subset" else cmp.verdict is Verdict.EQUAL
            return Truth(ok, str(cmp.verdict))
        if pred == "rel_bounded":
            res = rel_bounded(self.op(args[0]), self.op(args[1]))
            return Truth(res.holds)
        if pred == "dom_subset":
            inc = domain_leq(self.op(args[0]).domain(), self.op(args[1]).domain())
            return Truth(inc.holds)
        if pred == "polar":
            T, U, P = (self.op(a) for a in args)
            if not self.property(args[0], "closed"):
                return Truth(False, "polar decomposition is taken of closed operators")
            pol = op_polar(T)
            u = op_compare(U, pol.partial_isometry).verdict is Verdict.EQUAL
            m = op_compare(P, pol.modulus).verdict is Verdict.EQUAL
            return Truth(u and m, "" if u and m else "factors differ from the polar decomposition")
        raise ValueError(f"no in-model meaning for {pred}")


def holds(fact: Fact, env: Mapping[str, MonomialOperator]) -> Truth:
    return Model(env).truth(fact)
