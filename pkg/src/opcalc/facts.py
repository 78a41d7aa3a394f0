"""Facts about operator terms: unary properties and relations."""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Comp, Term, normalize, sort_key, subterms

UNARY = (
    "densely_defined", "closeable", "closed", "symmetric", "selfadjoint", "normal",
    "quasinormal", "bounded", "unitary", "invertible_bounded", "dense_range", "injective",
    "finite_kernel", "closed_range", "finite_codim_range",
)
BINARY = ("subset", "equal", "rel_bounded", "dom_subset", "permutes")
TERNARY = ("polar",)

# sugar expanded at construction time
SUGAR = {"commutes_ext": 2, "intertwines": 3}

ARITY = {**{p: 1 for p in UNARY}, **{p: 2 for p in BINARY}, **{p: 3 for p in TERNARY}}
PREDICATES = tuple(ARITY)


class FactError(ValueError):
    pass


@dataclass(frozen=True)
class Fact:
    pred: str
    args: tuple

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.pred, self.args))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return f"{self.pred}(" + ", ".join(str(a) for a in self.args) + ")"

    def key(self) -> tuple:
        return (self.pred, tuple(sort_key(a) for a in self.args))

    def terms(self):
        for a in self.args:
            yield from subterms(a)


def make_fact(pred: str, *args: Term) -> Fact:
    """Build a normalized fact, expanding commutes_ext and intertwines."""
    if pred == "commutes_ext":
        if len(args) != 2:
            raise FactError("commutes_ext takes 2 arguments")
        a, b = args
        return make_fact("subset", Comp(a, b), Comp(b, a))
    if pred == "intertwines":
        if len(args) != 3:
            raise FactError("intertwines takes 3 arguments (K, N, M)")
        k, n, m = args
        return make_fact("subset", Comp(k, n), Comp(m, k))
    if pred not in ARITY:
        raise FactError(f"unknown predicate {pred!r}")
    if len(args) != ARITY[pred]:
        raise FactError(f"{pred} takes {ARITY[pred]} argument(s), got {len(args)}")
    return Fact(pred, tuple(normalize(a) for a in args))
