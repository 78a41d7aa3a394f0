"""Random in-model instantiation of rules.

Each rule variable is bound to a monomial drawn from a mix of generators
biased towards the hypotheses that appear in the rulebook: real diagonals
(self-adjoint), complex diagonals (normal), bilateral weighted shifts with
shift-periodic modulus (normal, sometimes unitary), boundedly invertible
diagonals and unconstrained monomials.  Polar factors are filled in from the
computed polar decomposition, and a variable constrained by `subset(V, t)`
or `equal(V, t)` is sometimes bound to the value of t itself.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .facts import Fact
from .generate import random_invertible_bounded, random_operator, random_scalar, random_symbol
from .operators import MonomialOperator, OperatorError, op_closure, op_polar
from .radical import RadicalComplex
from .rules import Rule, Status, rulebook
from .semantics import Model
from .sequences import GrowthSymbol, Space, SymbolError
from .terms import Atom, atoms, evaluate


def _real_diagonal(rng: random.Random, space: Space) -> MonomialOperator:
    a = random_symbol(rng, space).abs()
    if rng.random() < 0.3:
        a = a.scale(RadicalComplex(-1))
    return MonomialOperator.make(a, 0)


def _normal_shift(rng: random.Random, space: Space) -> MonomialOperator:
    """Bilateral (a, k) with |a| periodic of period dividing k: T*T = TT*."""
    k = rng.choice([1, 1, 2, -1])
    q = abs(k) if rng.random() < 0.5 else 1
    moduli = [rng.choice([Fraction(1), Fraction(1), Fraction(2), Fraction(1, 3)]) for _ in range(q)]
    phases = [random_scalar(rng).phase() for _ in range(q)]
    residues = [ph * RadicalComplex(m) for ph, m in zip(phases, moduli)]
    a = GrowthSymbol.build(space, RadicalComplex(1), residues, (), 1, {})
    return MonomialOperator.make(a, k)


def _operator(rng: random.Random, space: Space) -> MonomialOperator:
    roll = rng.random()
    if roll < 0.25:
        return _real_diagonal(rng, space)
    if roll < 0.45:
        return MonomialOperator.make(random_symbol(rng, space), 0)
    if roll < 0.6 and space is Space.BILATERAL:
        return _normal_shift(rng, space)
    if roll < 0.72:
        return random_invertible_bounded(rng, space)
    if roll < 0.76:
        return MonomialOperator.identity(space)
    return random_operator(rng, space, constraints=rng.random() < 0.5)


def _value_candidates(r: Rule) -> dict[str, list]:
    """Terms a variable may be set equal to (from subset/equal premises)."""
    out: dict[str, list] = {}
    for p in r.premises:
        if p.pred in ("subset", "equal"):
            for v, t in ((p.args[0], p.args[1]), (p.args[1], p.args[0])):
                if isinstance(v, Atom) and v.name not in atoms(t):
                    out.setdefault(v.name, []).append(t)
    return out


def instantiate_rule(r: Rule, rng: random.Random) -> dict[str, MonomialOperator]:
    space = rng.choice([Space.UNILATERAL, Space.BILATERAL])
    polar_of = {}
    for p in r.premises:
        if p.pred == "polar" and all(isinstance(a, Atom) for a in p.args):
            polar_of[p.args[1].name] = (p.args[0].name, "W")
            polar_of[p.args[2].name] = (p.args[0].name, "M")
    derived = _value_candidates(r)
    free = [v for v in r.variables if v not in polar_of]
    env: dict[str, MonomialOperator] = {}
    tied = [v for v in free if v in derived and rng.random() < 0.5]
    for v in free:
        if v not in tied:
            env[v] = _operator(rng, space)
    for v in tied:
        for t in derived[v]:
            if atoms(t) <= set(env):
                try:
                    env[v] = evaluate(t, env)
                    if rng.random() < 0.3:
                        env[v] = op_closure(env[v])
                except (OperatorError, SymbolError):
                    continue
                break
        env.setdefault(v, _operator(rng, space))
    for v, (base, part) in sorted(polar_of.items()):
        pol = op_polar(env[base])
        env[v] = pol.partial_isometry if part == "W" else pol.modulus
    return env


@dataclass
class RuleTally:
    rule: Rule
    trials: int = 0
    nonvacuous: int = 0
    violations: list = field(default_factory=list)
    unevaluable: int = 0
    failing_premises: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class Instance:
    env: dict
    failing_premise: Fact | None
    conclusions: list  # (Fact, bool | None)


def check_instance(r: Rule, env: dict) -> Instance:
    model = Model(env)
    for p in r.premises:
        if model.truth(p).value is not True:
            return Instance(env, p, [])
    return Instance(env, None, [(c, model.truth(c).value) for c in r.conclusions])


def soundness_suite(rules=None, trials: int = 100, seed: int = 0) -> list[RuleTally]:
    """Instantiate every rule `trials` times; a violation is an instance with all
    premises true and some conclusion false."""
    rules = [r for r in rulebook() if r.status is Status.SOUND] if rules is None else rules
    out = []
    for r in rules:
        rng = random.Random(f"{seed}:{r.id}")
        tally = RuleTally(r)
        for _ in range(trials):
            tally.trials += 1
            try:
                env = instantiate_rule(r, rng)
            except (OperatorError, SymbolError):
                tally.failing_premises["(instantiation left the model class)"] += 1
                continue
            inst = check_instance(r, env)
            if inst.failing_premise is not None:
                tally.failing_premises[str(inst.failing_premise)] += 1
                continue
            tally.nonvacuous += 1
            for c, v in inst.conclusions:
                if v is False:
                    tally.violations.append((env, c))
                elif v is None:
                    tally.unevaluable += 1
        out.append(tally)
    return out
