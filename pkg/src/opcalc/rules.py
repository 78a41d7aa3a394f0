"""The rulebook: closure/adjoint calculus and product theorems as Horn rules.

Premises and conclusions are written in the fact syntax.  Every atom in a
pattern is a variable, so `equal(adj(A * B), adj(B) * adj(A))` matches any
product.  Status AXIOM marks results imported rather than proved here (and
the structural facts of the closure/adjoint calculus); CONJECTURAL rules
only fire when explicitly enabled.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .dsl import parse_fact
from .facts import Fact, UNARY
from .terms import atoms

RULEBOOK_VERSION = "1"


class Status(str, Enum):
    SOUND = "SOUND"
    AXIOM = "AXIOM"
    CONJECTURAL = "CONJECTURAL"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Rule:
    id: str
    status: Status
    citation: str
    premises: tuple
    conclusions: tuple
    note: str = ""

    @property
    def variables(self) -> tuple[str, ...]:
        names: set[str] = set()
        for f in self.premises + self.conclusions:
            for a in f.args:
                names |= atoms(a)
        return tuple(sorted(names))

    def __str__(self) -> str:
        lhs = ", ".join(str(p) for p in self.premises)
        rhs = ", ".join(str(c) for c in self.conclusions)
        return f"[{self.id}] {lhs} => {rhs}"


def _facts(text: str) -> tuple[Fact, ...]:
    # split on top-level commas between facts
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return tuple(parse_fact(s.strip()) for s in out if s.strip())


def rule(id: str, status: Status, citation: str, premises: str, conclusions: str,
         note: str = "") -> Rule:
    return Rule(id, status, citation, _facts(premises), _facts(conclusions), note)


S, A, C = Status.SOUND, Status.AXIOM, Status.CONJECTURAL

# premises shared by the product rules: A, B closeable with AB and B*A* dense
_PAIR = ("densely_defined(A), densely_defined(B), closeable(A), closeable(B), "
         "densely_defined(A * B), densely_defined(adj(B) * adj(A))")
_CLOSEABLE3 = "closeable(A), closeable(B), closeable(A * B)"
_NORMAL2 = "normal(A), normal(B)"
_POLAR = ("normal(A), normal(B), dense_range(A), dense_range(B), "
          "polar(A, U, P), polar(B, V, Q), normal(A * B)")

_STRUCTURAL = [
    rule("S-ADJ", A, "adjoints are closed", "densely_defined(T)", "closed(adj(T))"),
    rule("S-ADJ-DD", A, "a closeable operator has a densely defined adjoint and T** is its closure",
         "densely_defined(T), closeable(T)",
         "densely_defined(adj(T)), equal(adj(adj(T)), cl(T))"),
    rule("S-CL", A, "the closure is a closed extension",
         "closeable(T)", "closed(cl(T)), subset(T, cl(T))"),
    rule("S-CL-DD", A, "extensions of densely defined operators are densely defined",
         "densely_defined(T), closeable(T)", "densely_defined(cl(T))"),
    rule("S-CLOSED-CL", A, "a closed operator is its own closure",
         "closed(T)", "closeable(T), equal(cl(T), T)"),
    rule("S-EQ", A, "equality is symmetric and means inclusion both ways",
         "equal(S, T)", "subset(S, T), subset(T, S), equal(T, S)"),
    rule("S-ANTISYM", A, "inclusion both ways is equality",
         "subset(S, T), subset(T, S)", "equal(S, T)"),
    rule("S-SUB-TRANS", A, "inclusion is transitive",
         "subset(R, S), subset(S, T)", "subset(R, T)"),
    rule("S-ADJ-ANTI", A, "adjoining reverses inclusions",
         "subset(S, T), densely_defined(S)", "subset(adj(T), adj(S))"),
    rule("S-CL-MIN", A, "the closure is the smallest closed extension",
         "closed(T), subset(S, T)", "subset(cl(S), T)"),
    rule("S-CL-MONO", A, "closure preserves inclusion",
         "subset(S, T), closeable(T)", "subset(cl(S), cl(T))"),
    rule("S-SUB-CLOSEABLE", A, "restrictions of closeable operators are closeable",
         "subset(S, T), closeable(T)", "closeable(S)"),
    rule("S-SUB-DD", A, "extensions of densely defined operators are densely defined",
         "subset(S, T), densely_defined(S)", "densely_defined(T)"),
    rule("S-SA", A, "self-adjoint operators are closed, symmetric and normal",
         "selfadjoint(T)",
         "densely_defined(T), closed(T), symmetric(T), normal(T), equal(adj(T), T)"),
    rule("S-SA-DEF", A, "T = T* is self-adjointness",
         "densely_defined(T), equal(adj(T), T)", "selfadjoint(T)"),
    rule("S-SYM", A, "symmetric means T is contained in T*",
         "symmetric(T)", "subset(T, adj(T))"),
    rule("S-SYM-DEF", A, "symmetric means T is contained in T*",
         "densely_defined(T), subset(T, adj(T))", "symmetric(T)"),
    rule("S-NORMAL", A, "normal means closed with T*T = TT*; normal operators are quasinormal",
         "normal(T)",
         "densely_defined(T), closed(T), equal(adj(T) * T, T * adj(T)), quasinormal(T)"),
    rule("S-NORMAL-DEF", A, "normal means closed with T*T = TT*",
         "densely_defined(T), closed(T), equal(adj(T) * T, T * adj(T))", "normal(T)"),
    rule("S-UNITARY", A, "unitaries are bounded, normal and boundedly invertible",
         "unitary(T)", "normal(T), bounded(T), invertible_bounded(T)"),
    rule("S-INVB", A, "a bounded everywhere defined inverse makes T closed, injective and onto",
         "invertible_bounded(T)",
         "closed(T), injective(T), dense_range(T), closed_range(T), finite_codim_range(T)"),
    rule("S-INJ", A, "a trivial kernel is finite dimensional", "injective(T)", "finite_kernel(T)"),
    rule("S-BOUNDED", A, "bounded everywhere defined operators are closed with bounded adjoints",
         "bounded(T)", "densely_defined(T), closed(T), bounded(adj(T))"),
    rule("S-CODIM", A, "for closed T with closed range, codim R(T*) = dim N(T)",
         "densely_defined(T), closed(T), closed_range(T), finite_kernel(T)",
         "finite_codim_range(adj(T))"),
    rule("S-CLOSED-RANGE", A, "closed range passes to the adjoint",
         "densely_defined(T), closed(T), closed_range(T)", "closed_range(adj(T))"),
    rule("S-DENSE-INJ", A, "R(T) is dense iff T* is injective",
         "densely_defined(T), closed(T), dense_range(T)", "injective(adj(T))"),
    rule("S-INJ-DENSE", A, "N(T) is trivial iff R(T*) is dense",
         "densely_defined(T), closed(T), injective(T)", "dense_range(adj(T))"),
]

_EQ_TRANSFER = [
    rule(f"S-EQ-{p.upper().replace('_', '-')}", A, "equal operators share their properties",
         f"equal(S, T), {p}(S)", f"{p}(T)")
    for p in UNARY
]

_PAPER = [
    rule("R-ADJ-PROD", A, "the adjoint of a product contains the reversed product of adjoints",
         "densely_defined(A), densely_defined(B), densely_defined(A * B)",
         "subset(adj(B) * adj(A), adj(A * B))"),
    rule("R-LEM1", S, "closure of a product and product of closures sit between AB and (B*A*)*",
         _PAIR,
         "closeable(A * B), subset(A * B, cl(A * B)), subset(cl(A * B), adj(adj(B) * adj(A))), "
         "subset(A * B, cl(A) * cl(B)), subset(cl(A) * cl(B), adj(adj(B) * adj(A)))"),
    rule("R-THM1a", S, "(B*A*)* = A**B** forces the product of closures to be closed",
         _PAIR + ", equal(adj(adj(B) * adj(A)), cl(A) * cl(B))",
         "closed(cl(A) * cl(B)), equal(adj(cl(A) * cl(B)), cl(adj(B) * adj(A)))"),
    rule("R-THM1b", S, "with closed factors, (B*A*)* = A**B** makes AB closed",
         _PAIR + ", closed(A), closed(B), equal(adj(adj(B) * adj(A)), cl(A) * cl(B))",
         "closed(A * B)"),
    rule("R-THM1c", S, "adding closedness of B*A* gives (AB)* = B*A*",
         _PAIR + ", closed(A), closed(B), closed(adj(B) * adj(A)), "
                 "equal(adj(adj(B) * adj(A)), cl(A) * cl(B))",
         "equal(adj(A * B), adj(B) * adj(A))"),
    rule("R-THM1d", S, "(B*A*)* equal to the closure of AB, with B*A* closed, gives (AB)* = B*A*",
         _PAIR + ", closed(adj(B) * adj(A)), equal(adj(adj(B) * adj(A)), cl(A * B))",
         "equal(adj(A * B), adj(B) * adj(A))"),
    rule("R-THM1e", S, "(AB)* = B*A* requires B*A* closed and the closure of AB to contain A**B**",
         _PAIR + ", equal(adj(A * B), adj(B) * adj(A))",
         "closed(adj(B) * adj(A)), subset(cl(A) * cl(B), cl(A * B))"),
    rule("R-THM2", A, "closed S with finite-codimensional range gives (TS)* = S*T*",
         "densely_defined(T), densely_defined(S), closed(S), finite_codim_range(S), "
         "densely_defined(T * S)",
         "equal(adj(T * S), adj(S) * adj(T))"),
    rule("R-COR2", S, "closed range of A* and a finite dimensional kernel of A give (AB)* = B*A*",
         _PAIR + ", closed(A), closed(B), closed(adj(B) * adj(A)), closed_range(adj(A)), "
                 "finite_kernel(A)",
         "equal(adj(A * B), adj(B) * adj(A))"),
    rule("R-LEM2", S, "a closed factor B with inverse in B(H) gives (AB)* = B*A*",
         "densely_defined(A), densely_defined(B), closed(B), invertible_bounded(B)",
         "equal(adj(A * B), adj(B) * adj(A))"),
    rule("R-COR1", S, "A*A and AA* are self-adjoint for closed densely defined A",
         "densely_defined(A), closed(A)",
         "selfadjoint(A * adj(A)), selfadjoint(adj(A) * A)"),
    rule("R-THM3", S, "if self-adjoint A commutes with self-adjoint B then AB is symmetric",
         "selfadjoint(A), selfadjoint(B), densely_defined(A * B), subset(A * B, B * A)",
         "symmetric(A * B), subset(cl(B * A), adj(A * B)), subset(cl(A * B), cl(B * A))"),
    rule("R-THM3b", S, "in that situation AB is self-adjoint exactly when (AB)* = cl(BA) = AB",
         "selfadjoint(A), selfadjoint(B), densely_defined(A * B), subset(A * B, B * A), "
         "selfadjoint(A * B)",
         "equal(adj(A * B), cl(B * A)), equal(cl(B * A), A * B)"),
    rule("R-THM4", S, "a self-adjoint product AB of self-adjoint factors makes B commute with A",
         "selfadjoint(A), selfadjoint(B), densely_defined(A * B), selfadjoint(A * B)",
         "subset(B * A, A * B)"),
    rule("R-THM4b", S, "if BA is self-adjoint too, the factors commute fully",
         "selfadjoint(A), selfadjoint(B), densely_defined(A * B), selfadjoint(A * B), "
         "densely_defined(B * A), selfadjoint(B * A)",
         "subset(A * B, B * A), equal(A * B, B * A)"),
    rule("R-THM5a", S, "unitary normal A commuting with normal B gives normal AB",
         _NORMAL2 + ", unitary(A), subset(A * B, B * A)", "normal(A * B)"),
    rule("R-THM5b", S, "unitary normal B with BA inside AB gives normal AB",
         _NORMAL2 + ", unitary(B), subset(B * A, A * B)", "normal(A * B)"),
    rule("R-THM5-2", S, "for unitary A, normality of AB passes to BA",
         _NORMAL2 + ", unitary(A), normal(A * B)", "normal(B * A)"),
    rule("R-THM5-2R", S, "for unitary A, normality of BA passes to AB",
         _NORMAL2 + ", unitary(A), normal(B * A)", "normal(A * B)"),
    rule("R-NCLOSE", S, "bounded normal B commuting with normal A makes the closure of BA normal",
         _NORMAL2 + ", bounded(B), subset(B * A, A * B)", "normal(cl(B * A))"),
    rule("R-DNVN", A, "a self-adjoint T inside a product of self-adjoint T1 T2 equals it",
         "selfadjoint(T), selfadjoint(P), selfadjoint(Q), subset(T, P * Q)",
         "equal(T, P * Q)"),
    rule("R-BINV-NORM", S, "boundedly invertible bounded normal B commuting with normal A: BA normal",
         _NORMAL2 + ", bounded(B), invertible_bounded(B), subset(B * A, A * B)",
         "closed(B * A), normal(B * A)"),
    rule("R-PRO-AINV", S, "boundedly invertible bounded normal A commuting with normal B: BA normal",
         _NORMAL2 + ", bounded(A), invertible_bounded(A), subset(A * B, B * A)",
         "normal(B * A)"),
    rule("R-EXMAD", A, "normal A, bounded normal B and BA = AB give normal BA and AB",
         _NORMAL2 + ", bounded(B), equal(B * A, A * B)", "normal(B * A), normal(A * B)"),
    rule("R-THM7", S, "normal AB of normal factors with dense ranges needs commuting moduli",
         _POLAR, "subset(Q * P, P * Q)",
         note="necessary direction only; the conclusion is an inclusion because the "
              "moduli may commute only on a core"),
    rule("R-COR3", S, "the product of the unitary factors' adjoints intertwines T*T and TT*",
         _POLAR, "intertwines(adj(U) * adj(V), adj(P * Q) * (P * Q), (P * Q) * adj(P * Q))",
         note="conclusion has depth 4; it is checked in-model but truncated in derivations "
              "at the default depth"),
    rule("R-FP", A, "a bounded operator intertwining normal N and M intertwines N* and M*",
         "bounded(K), normal(N), normal(M), intertwines(K, N, M)",
         "intertwines(K, adj(N), adj(M))"),
    rule("R-PROP2-1", S, "bounded closure of B and closed A give cl(AB) inside A cl(B)",
         "densely_defined(A), densely_defined(B), densely_defined(A * B), closed(A), "
         "bounded(cl(B))",
         "closeable(A * B), subset(cl(A * B), A * cl(B))"),
    rule("R-PROP2-2", S, "inverse of B with bounded closure and compatible restrictions of A "
                         "give A cl(B) inside cl(AB)",
         "injective(B), injective(cl(B)), bounded(cl(inv(B))), closeable((A * B) * inv(B)), "
         "subset((A * cl(B)) * inv(cl(B)), cl((A * B) * inv(B))), closeable(A * B)",
         "subset(A * cl(B), cl(A * B))",
         note="A restricted to D(A) and R(B) is written (A * B) * inv(B)"),
    rule("R-PROP3-1", C, "B relatively AB-bounded would give cl(AB) inside cl(A) cl(B)",
         _CLOSEABLE3 + ", rel_bounded(B, A * B)",
         "subset(cl(A * B), cl(A) * cl(B))",
         note="stated without a proof; sufficiency is open"),
    rule("R-PROP3-2", C, "closeable B^-1, relatively A-bounded, would give cl(A) cl(B) inside cl(AB)",
         _CLOSEABLE3 + ", injective(B), closeable(inv(B)), rel_bounded(inv(B), A)",
         "subset(cl(A) * cl(B), cl(A * B))",
         note="stated without a proof"),
    rule("R-THM10", A, "D(T) inside D(B) with T closed and B closeable makes B T-bounded",
         "closed(T), closeable(B), dom_subset(T, B)", "rel_bounded(B, T)"),
    rule("R-LEM3-1", S, "dense D(B*A*) gives cl(AB) inside the closure of cl(A) cl(B)",
         _PAIR + ", closeable(A * B)",
         "subset(cl(A * B), cl(cl(A) * cl(B)))"),
    rule("R-LEM3-2", S, "bounded closure of B and closed A give cl(AB) inside A cl(B)",
         "densely_defined(A), densely_defined(B), densely_defined(A * B), closeable(A * B), "
         "closed(A), bounded(cl(B))",
         "subset(cl(A * B), A * cl(B))"),
    rule("R-LEM3-3", S, "cl(AB) inside cl(A) cl(B) makes B relatively AB-bounded",
         _CLOSEABLE3 + ", subset(cl(A * B), cl(A) * cl(B))",
         "rel_bounded(cl(B), cl(A * B)), rel_bounded(B, A * B)"),
    rule("R-LEM3-4", S, "cl(A) cl(B) inside cl(AB) makes cl(A) cl(B) closeable with the same closure",
         _CLOSEABLE3 + ", subset(cl(A) * cl(B), cl(A * B))",
         "closeable(cl(A) * cl(B)), equal(cl(cl(A) * cl(B)), cl(A * B))"),
    rule("R-LEM4", S, "cl(B) relatively bounded by cl(A) cl(B) makes that product closed",
         _CLOSEABLE3 + ", rel_bounded(cl(B), cl(A) * cl(B))",
         "closed(cl(A) * cl(B)), subset(cl(A * B), cl(A) * cl(B))"),
    rule("R-PROP4", S, "a quasinormal operator with dense range is normal",
         "quasinormal(T), dense_range(T)", "normal(T)"),
    rule("R-THM12", A, "normal A, B and AB with AB = BA permute",
         _NORMAL2 + ", normal(A * B), equal(A * B, B * A)", "permutes(A, B)"),
    rule("R-PROP5", S, "commuting boundedly invertible normal operators have normal products",
         _NORMAL2 + ", invertible_bounded(A), invertible_bounded(B), equal(B * A, A * B)",
         "normal(B * A), normal(A * B)"),
    rule("R-THM13", A, "AB = BA for invertible normal A, B carries over to the adjoints",
         _NORMAL2 + ", invertible_bounded(A), invertible_bounded(B), equal(A * B, B * A)",
         "equal(A * adj(B), adj(B) * A), equal(B * adj(A), adj(A) * B)"),
    rule("R-THM14", S, "AB = BA with only B invertible gives A*B inside BA* and AB* inside B*A",
         _NORMAL2 + ", invertible_bounded(B), equal(A * B, B * A)",
         "subset(adj(A) * B, B * adj(A)), subset(A * adj(B), adj(B) * A)"),
    rule("R-THM15", S, "AB = BA with only B invertible makes AB normal",
         _NORMAL2 + ", invertible_bounded(B), equal(A * B, B * A)", "normal(A * B)"),
    rule("R-COR-PERM", S, "commuting normal A, B with B invertible permute",
         _NORMAL2 + ", invertible_bounded(B), equal(B * A, A * B)", "permutes(A, B)",
         note="follows from the two preceding results; never evaluated in the model"),
]


@lru_cache(maxsize=1)
def rulebook() -> tuple[Rule, ...]:
    rules = tuple(_STRUCTURAL + _EQ_TRANSFER + _PAPER)
    ids = [r.id for r in rules]
    if len(ids) != len(set(ids)):
        raise AssertionError("duplicate rule ids")
    return rules


def rule_by_id(rule_id: str) -> Rule:
    for r in rulebook():
        if r.id == rule_id:
            return r
    raise KeyError(rule_id)


def select(*, conjectural: bool = False) -> tuple[Rule, ...]:
    return tuple(r for r in rulebook() if conjectural or r.status is not Status.CONJECTURAL)
