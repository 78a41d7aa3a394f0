"""Forward chaining over facts about operator terms.

The fixpoint is computed semi-naively: each round only joins rule premises
against at least one fact that is new since the previous round.  Facts whose
terms are deeper than the depth bound are dropped and counted; facts that
mention inv(t) wait until t is known to be injective.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .facts import Fact, make_fact
from .operators import MonomialOperator
from .rules import Rule, Status, rule_by_id, select
from .semantics import Model
from .terms import D_MAX, Adj, Atom, Cl, Comp, Inv, Lit, Restrict, Term, atoms, depth

ASSUMED = "assumed"


class InferenceError(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    fact: Fact
    rule: str
    premises: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return self.rule == ASSUMED

    def rules_used(self) -> set[str]:
        out = set() if self.is_leaf else {self.rule}
        for p in self.premises:
            out |= p.rules_used()
        return out


# -- matching ---------------------------------------------------------------


def unify(pattern: Term, term: Term, binding: dict) -> dict | None:
    """Extend `binding` so that pattern[binding] == term, or return None."""
    if isinstance(pattern, Atom):
        bound = binding.get(pattern.name)
        if bound is None:
            out = dict(binding)
            out[pattern.name] = term
            return out
        return binding if bound == term else None
    if type(pattern) is not type(term):
        return None
    if isinstance(pattern, Comp):
        b = unify(pattern.left, term.left, binding)
        return None if b is None else unify(pattern.right, term.right, b)
    if isinstance(pattern, (Adj, Cl, Inv)):
        return unify(pattern.term, term.term, binding)
    return binding if pattern == term else None


def substitute(pattern: Term, binding: Mapping[str, Term]) -> Term:
    if isinstance(pattern, Atom):
        return binding.get(pattern.name, pattern)
    if isinstance(pattern, Comp):
        return Comp(substitute(pattern.left, binding), substitute(pattern.right, binding))
    if isinstance(pattern, (Adj, Cl, Inv)):
        return type(pattern)(substitute(pattern.term, binding))
    if isinstance(pattern, Restrict):
        return Restrict(substitute(pattern.term, binding), pattern.constraints)
    return pattern


def _ground(pattern: Term, binding: Mapping[str, Term]) -> bool:
    if isinstance(pattern, Atom):
        return pattern.name in binding
    if isinstance(pattern, Lit):
        return True
    if isinstance(pattern, Comp):
        return _ground(pattern.left, binding) and _ground(pattern.right, binding)
    return _ground(pattern.term, binding)


def instantiate(pattern: Fact, binding: Mapping[str, Term]) -> Fact:
    return make_fact(pattern.pred, *(substitute(a, binding) for a in pattern.args))


# -- the fact store ---------------------------------------------------------


class FactStore:
    def __init__(self):
        self.derivations: dict[Fact, Derivation] = {}
        self.by_pred: dict[str, list[Fact]] = defaultdict(list)
        self.by_arg: dict[tuple, list[Fact]] = defaultdict(list)

    def __contains__(self, f: Fact) -> bool:
        return f in self.derivations

    def add(self, d: Derivation) -> None:
        f = d.fact
        self.derivations[f] = d
        self.by_pred[f.pred].append(f)
        for i, a in enumerate(f.args):
            self.by_arg[(f.pred, i, a)].append(f)

    def candidates(self, pattern: Fact, binding: Mapping[str, Term]) -> list[Fact]:
        for i, a in enumerate(pattern.args):
            if _ground(a, binding):
                return self.by_arg.get((pattern.pred, i, substitute(a, binding)), [])
        return self.by_pred.get(pattern.pred, [])

    def admits_inverse_of(self, t: Term) -> bool:
        return (make_fact("injective", t) in self.derivations
                or make_fact("invertible_bounded", t) in self.derivations)


def _inverses_ok(f: Fact, store: FactStore) -> bool:
    for t in f.terms():
        if isinstance(t, Inv) and not store.admits_inverse_of(t.term):
            return False
    return True


def _depth(f: Fact) -> int:
    return max(depth(a) for a in f.args)


# -- fixpoint ---------------------------------------------------------------


@dataclass
class Fixpoint:
    derivations: dict  # Fact -> Derivation, in derivation order
    asserted: tuple
    truncated: set = field(default_factory=set)
    pending: set = field(default_factory=set)  # inverse terms never admitted
    rounds: int = 0

    @property
    def facts(self) -> set:
        return set(self.derivations)

    def derived(self) -> list[Fact]:
        """Facts not asserted, sorted canonically."""
        asserted = set(self.asserted)
        return sorted((f for f in self.derivations if f not in asserted), key=Fact.key)

    def __contains__(self, f: Fact) -> bool:
        return f in self.derivations


def check_assertions(facts: Iterable[Fact], d_max: int = D_MAX) -> list[Fact]:
    facts = list(dict.fromkeys(facts))
    known = {(f.pred, f.args[0]) for f in facts if len(f.args) == 1}
    for f in facts:
        if _depth(f) > d_max:
            raise InferenceError(f"{f}: term depth {_depth(f)} exceeds the bound {d_max}")
        for t in f.terms():
            if isinstance(t, Inv) and ("injective", t.term) not in known \
                    and ("invertible_bounded", t.term) not in known:
                raise InferenceError(
                    f"{f}: inv({t.term}) needs an injective or invertible_bounded fact")
    return facts


def infer_fixpoint(facts: Iterable[Fact], rules: Iterable[Rule] | None = None,
                   d_max: int = D_MAX, *, conjectural: bool = False,
                   max_rounds: int = 1000) -> Fixpoint:
    asserted = check_assertions(facts, d_max)
    rules = list(select(conjectural=conjectural) if rules is None else rules)
    store = FactStore()
    for f in asserted:
        store.add(Derivation(f, ASSUMED))
    result = Fixpoint(store.derivations, tuple(asserted))
    delta = list(asserted)
    waiting: dict[Fact, Derivation] = {}
    rounds = 0
    while delta and rounds < max_rounds:
        rounds += 1
        delta_store = FactStore()
        for f in delta:
            delta_store.add(store.derivations[f])
        fresh: dict[Fact, Derivation] = {}
        for r in rules:
            for i in range(len(r.premises)):
                for binding, used in _join(r, i, store, delta_store):
                    for pattern in r.conclusions:
                        f = instantiate(pattern, binding)
                        if f in store or f in fresh:
                            continue
                        if _depth(f) > d_max:
                            result.truncated.add(f)
                            continue
                        d = Derivation(f, r.id, tuple(store.derivations[u] for u in used))
                        fresh[f] = d
        # admit new facts; inverse terms wait for their injectivity fact
        delta = []
        for f, d in list(waiting.items()) + list(fresh.items()):
            if f in store:
                waiting.pop(f, None)
                continue
            waiting[f] = d
        progress = True
        while progress:
            progress = False
            for f in sorted(waiting, key=Fact.key):
                if _inverses_ok(f, store):
                    store.add(waiting.pop(f))
                    delta.append(f)
                    progress = True
    result.pending = set(waiting)
    result.rounds = rounds
    return result


def _match(pattern: Fact, f: Fact, binding: dict) -> dict | None:
    b: dict | None = binding
    for pa, fa in zip(pattern.args, f.args):
        b = unify(pa, fa, b)
        if b is None:
            return None
    return b


def _vars(f: Fact) -> set[str]:
    out: set[str] = set()
    for a in f.args:
        out |= atoms(a)
    return out


@lru_cache(maxsize=None)
def _plan(r: Rule, pivot: int) -> tuple[int, ...]:
    """Join order after the pivot: premises with a ground argument first, then
    those sharing the most variables with what is already bound."""
    bound = _vars(r.premises[pivot])
    rest = [j for j in range(len(r.premises)) if j != pivot]
    order = []
    while rest:
        def score(j):
            p = r.premises[j]
            ground = any(atoms(a) <= bound for a in p.args)
            return (not ground, -len(_vars(p) & bound), len(_vars(p) - bound), j)
        best = min(rest, key=score)
        order.append(best)
        rest.remove(best)
        bound |= _vars(r.premises[best])
    return tuple(order)


def _join(r: Rule, pivot: int, store: FactStore, delta: FactStore):
    """Bindings for the premises of r where premise `pivot` matches a fresh fact."""
    order = _plan(r, pivot)
    out = []

    def go(k: int, binding: dict, used: tuple) -> None:
        if k == len(order):
            out.append((binding, used))
            return
        j = order[k]
        pattern = r.premises[j]
        for f in store.candidates(pattern, binding):
            b = _match(pattern, f, binding)
            if b is not None:
                go(k + 1, b, used + ((j, f),))

    for f in delta.candidates(r.premises[pivot], {}):
        b = _match(r.premises[pivot], f, {})
        if b is not None:
            go(0, b, ((pivot, f),))
    # report premises in the rule's own order
    return [(b, tuple(f for _, f in sorted(u, key=lambda x: x[0]))) for b, u in out]


# -- explanation and replay -------------------------------------------------


def explain(fact: Fact, fixpoint: Fixpoint) -> str:
    if fact not in fixpoint.derivations:
        raise InferenceError(f"{fact} was not derived")
    lines: list[str] = []

    def render(d: Derivation, indent: int) -> None:
        pad = "  " * indent
        if d.is_leaf:
            lines.append(f"{pad}{d.fact}  [assumed]")
            return
        r = rule_by_id(d.rule)
        tag = "" if r.status is Status.SOUND else f" {r.status}"
        lines.append(f"{pad}{d.fact}  [{r.id}{tag}: {r.citation}]")
        for p in d.premises:
            render(p, indent + 1)

    render(fixpoint.derivations[fact], 0)
    return "\n".join(lines)


def replay(d: Derivation, rules: Mapping[str, Rule] | None = None) -> bool:
    """Re-derive d from its leaves, checking every step against its rule."""
    if d.is_leaf:
        return True
    r = rules[d.rule] if rules else rule_by_id(d.rule)
    if len(d.premises) != len(r.premises):
        return False
    binding: dict | None = {}
    for pattern, p in zip(r.premises, d.premises):
        if p.fact.pred != pattern.pred:
            return False
        for pa, fa in zip(pattern.args, p.fact.args):
            binding = unify(pa, fa, binding)
            if binding is None:
                return False
    if d.fact not in {instantiate(c, binding) for c in r.conclusions}:
        return False
    return all(replay(p, rules) for p in d.premises)


# -- in-model soundness -----------------------------------------------------


@dataclass
class FactCheck:
    fact: Fact
    value: bool | None
    rules: tuple
    conjectural: bool
    detail: str = ""


@dataclass
class SoundnessReport:
    vacuous: Fact | None
    checks: list

    @property
    def failures(self) -> list[FactCheck]:
        return [c for c in self.checks if c.value is False and not c.conjectural]

    @property
    def conjectural_failures(self) -> list[FactCheck]:
        return [c for c in self.checks if c.value is False and c.conjectural]

    @property
    def unevaluable(self) -> list[FactCheck]:
        return [c for c in self.checks if c.value is None]

    @property
    def ok(self) -> bool:
        return not self.failures


def model_check_soundness(facts: Iterable[Fact], env: Mapping[str, MonomialOperator],
                          rules: Iterable[Rule] | None = None, d_max: int = D_MAX, *,
                          conjectural: bool = False) -> SoundnessReport:
    facts = list(facts)
    missing = {t.name for f in facts for t in f.terms() if isinstance(t, Atom)} - set(env)
    if missing:
        raise InferenceError("uninstantiated atoms: " + ", ".join(sorted(missing)))
    model = Model(env)
    for f in facts:
        if model.truth(f).value is not True:
            return SoundnessReport(f, [])
    fx = infer_fixpoint(facts, rules, d_max, conjectural=conjectural)
    plain = fx
    if conjectural:
        plain = infer_fixpoint(facts, None if rules is None else
                               [r for r in rules if r.status is not Status.CONJECTURAL],
                               d_max, conjectural=False)
    checks = []
    for f in fx.derived():
        used = fx.derivations[f].rules_used()
        conj = f not in plain
        t = model.truth(f)
        checks.append(FactCheck(f, t.value, tuple(sorted(used)), conj, t.detail))
    return SoundnessReport(None, checks)
