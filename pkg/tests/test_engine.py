import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opcalc.dsl import parse_fact, parse_term
from opcalc.engine import (InferenceError, check_assertions, explain, infer_fixpoint,
                           model_check_soundness, replay)
from opcalc.facts import FactError, make_fact
from opcalc.operators import Verdict, op_compare
from opcalc.rules import Rule, Status, rule, rulebook, select
from opcalc.semantics import Model
from opcalc.terms import Adj, Atom, Cl, Comp, DepthOverflow, normalize

from conftest import op

F = parse_fact
THM4 = [F(s) for s in ("selfadjoint(A)", "selfadjoint(B)", "densely_defined(A * B)",
                       "selfadjoint(A * B)")]


# -- terms ------------------------------------------------------------------


def test_normalization_examples():
    A = Atom("A")
    assert normalize(Adj(Cl(A))) == Adj(A)
    assert normalize(Cl(Cl(A))) == Cl(A)
    assert normalize(Adj(Adj(A))) == Adj(Adj(A))


def test_normalization_is_idempotent():
    for text in ("adj(cl(adj(cl(A * B))))", "cl(cl(A) * cl(cl(B)))", "adj(adj(cl(A)))"):
        t = parse_term(text)
        assert normalize(t) == normalize(normalize(t))


def test_depth_overflow():
    with pytest.raises(DepthOverflow):
        normalize(parse_term("adj(adj(adj(adj(A))))"), d_max=3)
    with pytest.raises(InferenceError):
        check_assertions([F("closed(adj(adj(adj(adj(A)))))")])


def test_commutation_sugar():
    assert make_fact("commutes_ext", Atom("A"), Atom("B")) == F("subset(A * B, B * A)")
    with pytest.raises(FactError):
        make_fact("subset", Atom("A"))


def test_inverse_terms_need_injectivity():
    with pytest.raises(InferenceError):
        check_assertions([F("bounded(inv(B))")])
    check_assertions([F("injective(B)"), F("bounded(inv(B))")])


# -- fixpoint ---------------------------------------------------------------


@pytest.fixture(scope="module")
def thm4():
    return infer_fixpoint(THM4)


def test_self_adjoint_product_gives_commutation(thm4):
    assert F("subset(B * A, A * B)") in thm4
    assert thm4.derivations[F("subset(B * A, A * B)")].rule == "R-THM4"


def test_self_adjoint_products_of_closed_operator():
    fx = infer_fixpoint([F("densely_defined(A)"), F("closed(A)")])
    assert F("selfadjoint(A * adj(A))") in fx
    assert F("selfadjoint(adj(A) * A)") in fx


def test_closed_operator_is_its_closure():
    assert F("equal(cl(A), A)") in infer_fixpoint([F("closed(A)")])


def test_structural_rules_fire():
    fx = infer_fixpoint([F("subset(S, T)"), F("densely_defined(S)"), F("closed(T)"),
                         F("subset(R, S)")])
    assert F("subset(adj(T), adj(S))") in fx
    assert F("subset(cl(S), T)") in fx
    assert F("subset(R, T)") in fx


def test_depth_truncation_is_reported(thm4):
    assert thm4.truncated
    assert all(max(len(str(a)) for a in f.args) > 0 for f in thm4.truncated)


def test_every_derivation_replays(thm4):
    for d in thm4.derivations.values():
        assert replay(d)


def test_derivation_leaves_are_asserted(thm4):
    asserted = set(thm4.asserted)

    def leaves(d):
        if d.is_leaf:
            yield d.fact
        for p in d.premises:
            yield from leaves(p)

    for d in list(thm4.derivations.values())[::50]:
        assert set(leaves(d)) <= asserted


def test_determinism_across_shuffled_runs():
    facts = THM4 + [F("closed(C)"), F("bounded(C)")]
    base = infer_fixpoint(facts, d_max=2)
    rng = random.Random(0)
    for _ in range(10):
        rules = list(select())
        rng.shuffle(rules)
        shuffled = list(facts)
        rng.shuffle(shuffled)
        fx = infer_fixpoint(shuffled, rules, d_max=2)
        assert fx.facts == base.facts
        assert fx.derived() == base.derived()


POOL = [F(s) for s in ("selfadjoint(A)", "selfadjoint(B)", "densely_defined(A * B)",
                       "closed(C)", "subset(A, C)", "normal(B)", "unitary(C)",
                       "subset(A * B, B * A)", "bounded(B)")]


@settings(max_examples=12)
@given(st.sets(st.sampled_from(POOL), max_size=5), st.sets(st.sampled_from(POOL), max_size=3))
def test_monotonicity(base, extra):
    small = infer_fixpoint(sorted(base, key=str), d_max=2)
    large = infer_fixpoint(sorted(base | extra, key=str), d_max=2)
    assert small.facts <= large.facts


def test_conjectural_rules_are_off_by_default():
    facts = [F("closeable(A)"), F("closeable(B)"), F("closeable(A * B)"),
             F("rel_bounded(B, A * B)")]
    target = F("subset(cl(A * B), cl(A) * cl(B))")
    assert target not in infer_fixpoint(facts)
    fx = infer_fixpoint(facts, conjectural=True)
    assert fx.derivations[target].rule == "R-PROP3-1"


# -- explanations -----------------------------------------------------------


def test_explain_renders_rule_tree(thm4):
    text = explain(F("subset(B * A, A * B)"), thm4)
    first, *rest = text.splitlines()
    assert first.startswith("subset(B * A, A * B)  [R-THM4: ")
    assert rest == [f"  {f}  [assumed]" for f in THM4]
    assert explain(F("subset(B * A, A * B)"), thm4) == text


def test_explain_leaf_and_missing(thm4):
    assert explain(THM4[0], thm4) == "selfadjoint(A)  [assumed]"
    with pytest.raises(InferenceError):
        explain(F("unitary(A)"), thm4)


# -- in-model soundness -----------------------------------------------------


def test_theorem_four_instance_holds_in_model():
    A = op("diag(poly(1,0,1; 1))")
    rep = model_check_soundness(THM4, {"A": A, "B": A})
    assert rep.vacuous is None and rep.ok
    assert len(rep.checks) > 1000
    # only the opaque predicate is left undecided
    assert {c.fact.pred for c in rep.unevaluable} <= {"permutes"}


def test_violated_premise_is_vacuous(ex1):
    A, B = ex1
    rep = model_check_soundness(THM4, {"A": A, "B": op("shift(1)")})
    assert rep.vacuous == F("selfadjoint(B)") and rep.checks == []


def test_uninstantiated_atom():
    with pytest.raises(InferenceError):
        model_check_soundness(THM4, {"A": op("shift(1)")})


def test_conjectural_failures_are_reported_apart():
    # a deliberately false conjecture: symmetric operators are bounded
    bogus = rule("X-BOGUS", Status.CONJECTURAL, "test only", "symmetric(T)", "bounded(T)")
    rules = [r for r in rulebook() if r.id == "S-SA"] + [bogus]
    T = op("diag(pow(1,1))")
    rep = model_check_soundness([F("selfadjoint(T)")], {"T": T}, rules, conjectural=True)
    assert rep.ok
    assert [c.fact for c in rep.conjectural_failures] == [F("bounded(T)")]


def test_no_contradictory_equalities(ex1):
    A, B = ex1
    facts = [F("selfadjoint(A)"), F("bounded(B)"), F("selfadjoint(B)")]
    fx = infer_fixpoint(facts)
    model = Model({"A": A, "B": B})
    for f in fx.facts:
        if f.pred == "equal":
            v = op_compare(model.op(f.args[0]), model.op(f.args[1])).verdict
            assert v is not Verdict.PROPER_SUBSET and v is not Verdict.PROPER_SUPERSET
