"""Operator expressions: named atoms, literals, adjoint, closure, product, inverse.

The same term algebra serves the DSL, the matrix oracle and the inference
engine.  Terms are immutable and structurally comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .operators import (
    MonomialOperator,
    op_adjoint,
    op_closure,
    op_compose,
    op_inverse,
    operator_literal,
)

D_MAX = 3


def _cached_hash(obj, key: tuple) -> int:
    h = obj.__dict__.get("_hash")
    if h is None:
        h = hash(key)
        object.__setattr__(obj, "_hash", h)
    return h


@dataclass(frozen=True, order=True)
class Atom:
    name: str

    def __hash__(self) -> int:
        return _cached_hash(self, ('Atom',) + (self.name,))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Lit:
    """A literal monomial written inline."""

    op: MonomialOperator

    def __hash__(self) -> int:
        return _cached_hash(self, ('Lit',) + (self.op,))

    def __str__(self) -> str:
        return operator_literal(self.op)


@dataclass(frozen=True)
class Restrict:
    term: "Term"
    constraints: tuple  # GrowthSymbols

    def __hash__(self) -> int:
        return _cached_hash(self, ('Restrict',) + (self.term, self.constraints))

    def __str__(self) -> str:
        inner = _wrap(self.term, _PREC_PRODUCT)
        return inner + " on " + " & ".join(f"dom({c})" for c in self.constraints)


@dataclass(frozen=True)
class Adj:
    term: "Term"

    def __hash__(self) -> int:
        return _cached_hash(self, ('Adj',) + (self.term,))

    def __str__(self) -> str:
        return f"adj({self.term})"


@dataclass(frozen=True)
class Cl:
    term: "Term"

    def __hash__(self) -> int:
        return _cached_hash(self, ('Cl',) + (self.term,))

    def __str__(self) -> str:
        return f"cl({self.term})"


@dataclass(frozen=True)
class Inv:
    term: "Term"

    def __hash__(self) -> int:
        return _cached_hash(self, ('Inv',) + (self.term,))

    def __str__(self) -> str:
        return f"inv({self.term})"


@dataclass(frozen=True)
class Comp:
    left: "Term"
    right: "Term"

    def __hash__(self) -> int:
        return _cached_hash(self, ('Comp',) + (self.left, self.right))

    def __str__(self) -> str:
        # products associate to the left
        return f"{_wrap(self.left, _PREC_PRODUCT)} * {_wrap(self.right, _PREC_ATOM)}"


Term = Union[Atom, Lit, Restrict, Adj, Cl, Inv, Comp]

_PREC_RESTRICT, _PREC_PRODUCT, _PREC_ATOM = 0, 1, 2


def _prec(t: Term) -> int:
    if isinstance(t, Restrict) or (isinstance(t, Lit) and t.op.constraints):
        return _PREC_RESTRICT
    if isinstance(t, Comp):
        return _PREC_PRODUCT
    return _PREC_ATOM


def _wrap(t: Term, needed: int) -> str:
    return f"({t})" if _prec(t) < needed else str(t)


def depth(t: Term) -> int:
    if isinstance(t, (Atom, Lit)):
        return 0
    if isinstance(t, Comp):
        return 1 + max(depth(t.left), depth(t.right))
    if isinstance(t, Restrict):
        return depth(t.term)
    return 1 + depth(t.term)


def atoms(t: Term) -> set[str]:
    if isinstance(t, Atom):
        return {t.name}
    if isinstance(t, Lit):
        return set()
    if isinstance(t, Comp):
        return atoms(t.left) | atoms(t.right)
    return atoms(t.term)


def subterms(t: Term):
    yield t
    if isinstance(t, Comp):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, (Adj, Cl, Inv, Restrict)):
        yield from subterms(t.term)


class DepthOverflow(ValueError):
    pass


def normalize(t: Term, d_max: int | None = None) -> Term:
    """Rewrite adj(cl t) -> adj(t) and cl(cl t) -> cl(t) everywhere.

    Both rewrites hold for every densely defined closeable operator, so they
    never depend on facts.  Unchanged subterms are returned as they are.
    """
    out = _normalize(t)
    if d_max is not None and depth(out) > d_max:
        raise DepthOverflow(f"term {out} has depth {depth(out)} > {d_max}")
    return out


def _normalize(t: Term) -> Term:
    if isinstance(t, Comp):
        left, right = _normalize(t.left), _normalize(t.right)
        return t if left is t.left and right is t.right else Comp(left, right)
    if isinstance(t, Adj):
        inner = _normalize(t.term)
        if isinstance(inner, Cl):
            return Adj(inner.term)
        return t if inner is t.term else Adj(inner)
    if isinstance(t, Cl):
        inner = _normalize(t.term)
        if isinstance(inner, Cl):
            return inner
        return t if inner is t.term else Cl(inner)
    if isinstance(t, (Inv, Restrict)):
        inner = _normalize(t.term)
        if inner is t.term:
            return t
        return Inv(inner) if isinstance(t, Inv) else Restrict(inner, t.constraints)
    return t


def sort_key(t: Term) -> tuple:
    return (depth(t), str(t))


class UnboundName(KeyError):
    pass


def evaluate(t: Term, env: Mapping[str, MonomialOperator]) -> MonomialOperator:
    """The in-model operator denoted by t (inverse may raise NotRepresentable)."""
    if isinstance(t, Atom):
        if t.name not in env:
            raise UnboundName(t.name)
        return env[t.name]
    if isinstance(t, Lit):
        return t.op
    if isinstance(t, Restrict):
        return evaluate(t.term, env).restrict(*t.constraints)
    if isinstance(t, Adj):
        return op_adjoint(evaluate(t.term, env))
    if isinstance(t, Cl):
        return op_closure(evaluate(t.term, env))
    if isinstance(t, Inv):
        return op_inverse(evaluate(t.term, env))
    if isinstance(t, Comp):
        return op_compose(evaluate(t.left, env), evaluate(t.right, env))
    raise TypeError(f"not a term: {t!r}")


def A(name: str) -> Atom:
    return Atom(name)


def comp(*ts: Term) -> Term:
    out = ts[0]
    for t in ts[1:]:
        out = Comp(out, t)
    return out
