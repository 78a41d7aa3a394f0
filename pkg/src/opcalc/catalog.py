"""Witness catalog: concrete operators for every rule, and the runner.

An entry binds atoms to monomial operators and lists hypotheses and
conclusions.  A hypothesis that does not come out as expected makes the
entry VACUOUS (and the report names it); otherwise the conclusions decide
PASS or FAIL.  Entries exercising a CONJECTURAL rule get their own section
and never affect the exit status.

Most rules carry hand-picked witnesses.  Structural axioms are witnessed by
a seeded search over the random instantiations used by the soundness suite.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable

from .dsl import parse_fact, parse_term
from .engine import model_check_soundness
from .facts import Fact
from .operators import MonomialOperator, OperatorError, op_polar
from .rules import Rule, Status, rule_by_id, rulebook
from .semantics import Model
from .sequences import Space, SymbolError
from .soundness import check_instance, instantiate_rule
from .states import state_classify
from .terms import evaluate

PASS, FAIL, VACUOUS = "PASS", "FAIL", "VACUOUS"
CONJ_PASS, CONJ_FAIL = "CONJECTURAL-PASS", "CONJECTURAL-FAIL"
VERDICTS = (PASS, FAIL, VACUOUS, CONJ_PASS, CONJ_FAIL)


@dataclass(frozen=True)
class Check:
    """kind is "fact" (expected true/false/opaque), "cmp" (a verdict),
    "state" (a state code) or "derive" (run the engine on the fact hypotheses
    and evaluate every derived fact)."""

    kind: str
    subject: tuple
    expected: str

    @property
    def name(self) -> str:
        if self.kind == "fact":
            return str(self.subject[0])
        if self.kind == "cmp":
            return f"cmp {self.subject[0]}, {self.subject[1]}"
        if self.kind == "state":
            return f"state {self.subject[0]}"
        return "derived facts hold in the model"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    rules: tuple
    witnesses: dict
    hypotheses: tuple
    conclusions: tuple
    note: str = ""

    @property
    def conjectural(self) -> bool:
        return any(rule_by_id(r).status is Status.CONJECTURAL for r in self.rules)


@dataclass
class CheckResult:
    name: str
    expected: str
    got: str
    ok: bool
    witness: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "expected": self.expected, "got": self.got}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class EntryResult:
    entry: CatalogEntry
    verdict: str
    checks: list
    failing_hypothesis: str | None = None

    def to_json(self) -> dict:
        out = {
            "id": self.entry.id,
            "rules": list(self.entry.rules),
            "verdict": self.verdict,
            "witnesses": {k: str(v) for k, v in sorted(self.entry.witnesses.items())},
            "checks": [c.to_json() for c in self.checks],
        }
        if self.failing_hypothesis is not None:
            out["failing_hypothesis"] = self.failing_hypothesis
        if self.entry.note:
            out["note"] = self.entry.note
        return out


@dataclass
class Report:
    main: list = field(default_factory=list)
    conjectural: list = field(default_factory=list)

    def counts(self) -> dict:
        out = {v: 0 for v in VERDICTS}
        for r in self.main + self.conjectural:
            out[r.verdict] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(r.verdict == FAIL for r in self.main)

    def to_json(self) -> dict:
        data = {"entries": [r.to_json() for r in self.main],
                "summary": {**self.counts(), "total": len(self.main) + len(self.conjectural)}}
        if self.conjectural:
            data["conjectural"] = [r.to_json() for r in self.conjectural]
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def render(self) -> str:
        lines = []

        def block(results):
            for r in results:
                text = f"{r.entry.id:<22} {r.verdict}"
                if r.failing_hypothesis:
                    text += f"  (hypothesis fails: {r.failing_hypothesis})"
                lines.append(text)
                for c in r.checks:
                    if not c.ok or c.witness:
                        extra = f"  witness {c.witness}" if c.witness else ""
                        lines.append(f"    {c.name}: expected {c.expected}, got {c.got}{extra}")

        block(self.main)
        if self.conjectural:
            lines.append("")
            lines.append("conjectural (not gating):")
            block(self.conjectural)
        counts = self.counts()
        lines.append("")
        lines.append("summary: " + ", ".join(f"{k} {v}" for k, v in counts.items() if v))
        return "\n".join(lines) + "\n"


# -- evaluation -------------------------------------------------------------


def _vector_text(entries) -> str:
    inner = ", ".join(f"{n}: {v}" for n, v in entries)
    return "{" + inner + ", ...}"


def _evaluate(check: Check, model: Model, entry: CatalogEntry) -> CheckResult:
    name = check.name
    try:
        if check.kind == "fact":
            v = model.truth(check.subject[0]).value
            got = "opaque" if v is None else str(v).lower()
            return CheckResult(name, check.expected, got, got == check.expected)
        if check.kind == "cmp":
            cmp = model.compare(*check.subject)
            witness = None
            if cmp.witness is not None:
                witness = _vector_text(cmp.witness.vector(6))
            got = str(cmp.verdict)
            return CheckResult(name, check.expected, got, got == check.expected, witness)
        if check.kind == "state":
            got = str(state_classify(model.op(check.subject[0])).state)
            return CheckResult(name, check.expected, got, got == check.expected)
        if check.kind == "derive":
            facts = [h.subject[0] for h in entry.hypotheses
                     if h.kind == "fact" and h.expected == "true"]
            rep = model_check_soundness(facts, model.env)
            if rep.vacuous is not None:
                got = f"premise {rep.vacuous} does not hold"
                return CheckResult(name, check.expected, got, False)
            bad = rep.failures
            got = f"{len(bad)} false"
            result = CheckResult(name, check.expected, got, got == check.expected)
            if bad:
                result.witness = "; ".join(str(c.fact) for c in bad[:3])
            return result
    except (OperatorError, SymbolError) as exc:
        return CheckResult(name, check.expected, f"error: {exc}", False)
    raise ValueError(f"unknown check kind {check.kind}")


def run_entry(entry: CatalogEntry) -> EntryResult:
    model = Model(entry.witnesses)
    checks = []
    for h in entry.hypotheses:
        res = _evaluate(h, model, entry)
        checks.append(res)
        if not res.ok:
            return EntryResult(entry, VACUOUS, checks, f"{res.name} is {res.got}")
    ok = True
    for c in entry.conclusions:
        res = _evaluate(c, model, entry)
        checks.append(res)
        ok = ok and res.ok
    if entry.conjectural:
        return EntryResult(entry, CONJ_PASS if ok else CONJ_FAIL, checks)
    return EntryResult(entry, PASS if ok else FAIL, checks)


def run_catalog(entries: Iterable[CatalogEntry], *, conjectural: bool = False) -> Report:
    """Run entries sorted by id; CONJECTURAL entries only when asked."""
    report = Report()
    for e in sorted(entries, key=lambda e: e.id):
        if e.conjectural:
            if conjectural:
                report.conjectural.append(run_entry(e))
        else:
            report.main.append(run_entry(e))
    return report


# -- building entries -------------------------------------------------------


def _ops(space: Space | str, **literals: str) -> dict:
    return {k: evaluate(parse_term(v, space), {}) for k, v in literals.items()}


def _fact(text: str, expected: str = "true") -> Check:
    return Check("fact", (parse_fact(text),), expected)


def _cmp(a: str, b: str, expected: str) -> Check:
    return Check("cmp", (parse_term(a), parse_term(b)), expected)


def _facts_of(patterns: Iterable[Fact]) -> tuple:
    out = []
    for f in patterns:
        expected = "opaque" if f.pred == "permutes" else "true"
        out.append(Check("fact", (f,), expected))
    return tuple(out)


def _rule_entry(rule_id: str, witnesses: dict, note: str = "", entry_id: str | None = None,
                extra: tuple = ()) -> CatalogEntry:
    r = rule_by_id(rule_id)
    return CatalogEntry(entry_id or r.id, (r.id,), witnesses, _facts_of(r.premises),
                        _facts_of(r.conclusions) + extra, note)


def _with_polar(env: dict) -> dict:
    out = dict(env)
    for base, (w, m) in (("A", ("U", "P")), ("B", ("V", "Q"))):
        pol = op_polar(env[base])
        out[w], out[m] = pol.partial_isometry, pol.modulus
    return out


UNI, BI = Space.UNILATERAL, Space.BILATERAL

# 1 + n^2 and its reciprocal
_A1 = "diag(poly(1,0,1; 1))"
_B1 = "diag(poly(1,0,1; -1))"
_SQ = "diag(pow(1,2))"             # (n+1)^2
_LIN = "diag(pow(1,1))"            # n+1
_PER = "diag(per(2; 1, 2))"        # bounded, boundedly invertible, normal
_ISQ = "diag(coeff(0,1,1) * pow(1,2))"  # i (n+1)^2, normal, not self-adjoint


def _named_entries(seed: int) -> list[CatalogEntry]:
    ex1 = _ops(UNI, A=_A1, B=_B1)
    out = [
        CatalogEntry(
            "EX1", ("R-LEM1", "R-ADJ-PROD", "R-COR1"), ex1,
            (_fact("selfadjoint(A)"), _fact("bounded(B)"), _fact("selfadjoint(B)")),
            (_cmp("A * B", "shift(0)", "equal"),
             _cmp("B * A", "A * B", "proper-subset"),
             _fact("closed(B * A)", "false"),
             _cmp("cl(B * A)", "shift(0)", "equal"),
             _fact("normal(cl(B * A))"),
             _cmp("adj(A * B)", "B * A", "proper-superset"),
             Check("derive", (), "0 false")),
            "multiplication by 1 + n^2 and its bounded inverse; the witness vector lies in "
            "the domain of BA's closure but not in D(A)"),
        CatalogEntry(
            "THM4-W", ("R-THM4", "R-THM4b"), _ops(UNI, A=_SQ, B=_SQ),
            _facts_of(rule_by_id("R-THM4").premises),
            (_fact("subset(B * A, A * B)"), _cmp("B * A", "A * B", "equal"),
             Check("derive", (), "0 false")),
            "equal positive diagonals; the engine derives BA inside AB and the model gives equality"),
        CatalogEntry(
            "THM5-2-W", ("R-THM5-2", "R-THM5-2R"),
            _ops(BI, A="shift(1)", B="diag(exp(2))"),
            (_fact("normal(A)"), _fact("normal(B)"), _fact("unitary(A)")),
            (_fact("normal(A * B)", "false"), _fact("normal(B * A)", "false")),
            "the bilateral shift times 2^n: neither product is normal, consistent with the "
            "equivalence"),
        CatalogEntry(
            "THM5-2-W-CONST", ("R-THM5-2", "R-THM5-2R"),
            _ops(BI, A="shift(1)", B="diag(per(2; 5, coeff(3,4,1)))"),
            (_fact("normal(A)"), _fact("normal(B)"), _fact("unitary(A)")),
            (_fact("normal(A * B)"), _fact("normal(B * A)")),
            "constant modulus 5: both products are normal"),
        CatalogEntry(
            "NCLOSE-W", ("R-NCLOSE",), _ops(UNI, A=_ISQ, B=_PER),
            _facts_of(rule_by_id("R-NCLOSE").premises),
            (_fact("normal(cl(B * A))"), Check("derive", (), "0 false"))),
        CatalogEntry(
            "THM15-W", ("R-THM15", "R-THM14", "R-COR-PERM"), _ops(UNI, A=_SQ, B=_PER),
            _facts_of(rule_by_id("R-THM15").premises),
            (_cmp("A * B", "B * A", "equal"), _fact("normal(A * B)"),
             _fact("permutes(A, B)", "opaque"), Check("derive", (), "0 false"))),
        CatalogEntry(
            "SHIFT-STATE", (), _ops(UNI, S="shift(1)"), (),
            (Check("state", (parse_term("S"),), "III_1 I_3"),
             _fact("injective(S)"), _fact("dense_range(S)", "false"),
             _fact("closed_range(S)"))),
        CatalogEntry(
            "CHAIN-W", ("R-LEM1", "R-LEM3-1", "R-PROP2-1"), ex1,
            (_fact("injective(B)"), _fact("bounded(B)")),
            (_cmp("inv(B)", "A", "equal"),
             _cmp("adj(inv(B))", "inv(adj(B))", "equal"),
             _cmp("cl(adj(inv(B)))", "A", "equal"),
             _fact("subset(cl(A) * cl(B), cl(cl(A) * cl(B)))"),
             _fact("subset(cl(cl(A) * cl(B)), cl(A * B))"),
             _fact("subset(cl(A * B), adj(adj(B) * adj(A)))"),
             _fact("subset(cl(A) * cl(B), adj(adj(B) * adj(A)))")),
            "invert, adjoin and close on the multiplication pair; each inclusion of the chain "
            "from the product of closures up to (B*A*)* is checked"),
        CatalogEntry(
            "VN-W", ("R-COR1",), {"A": _vn_witness(seed)},
            _facts_of(rule_by_id("R-COR1").premises),
            (_fact("selfadjoint(A * adj(A))"), _fact("selfadjoint(adj(A) * A)"),
             Check("derive", (), "0 false")),
            "a seeded random closed monomial"),
        CatalogEntry(
            "PROP4-W", ("R-PROP4",), _ops(UNI, T="shift(1)"),
            _facts_of(rule_by_id("R-PROP4").premises),
            (_fact("normal(T)"),),
            "the unilateral shift is quasinormal but its range is not dense, so nothing "
            "is claimed"),
    ]
    return out


def _vn_witness(seed: int) -> MonomialOperator:
    from .generate import random_operator
    from .operators import op_closure
    rng = random.Random(f"{seed}:VN-W")
    return op_closure(random_operator(rng, rng.choice([UNI, BI])))


def _hand_entries() -> list[CatalogEntry]:
    ex1 = _ops(UNI, A=_A1, B=_B1)
    lin2 = _ops(UNI, A=_LIN, B=_LIN)
    entries = [
        _rule_entry("R-ADJ-PROD", ex1),
        _rule_entry("R-LEM1", _ops(UNI, A="diag(pow(1,1)).shift(1)", B=_B1 + " on dom(pow(1,3))")),
        _rule_entry("R-THM1a", lin2),
        _rule_entry("R-THM1b", lin2),
        _rule_entry("R-THM1c", lin2),
        _rule_entry("R-THM1d", lin2),
        _rule_entry("R-THM1e", lin2),
        _rule_entry("R-THM2", _ops(UNI, T=_LIN, S=_PER)),
        _rule_entry("R-COR2", lin2),
        _rule_entry("R-LEM2", _ops(UNI, A="diag(pow(1,2)).shift(1)", B=_PER)),
        _rule_entry("R-COR1", _ops(UNI, A="diag(pow(1,1)).shift(1)")),
        _rule_entry("R-THM3", _ops(UNI, A=_B1, B=_A1),
                    "BA is the identity on D(1 + n^2), so AB = BA|D(A) sits inside BA"),
        _rule_entry("R-THM3b", lin2),
        _rule_entry("R-THM4", _ops(UNI, A=_SQ, B=_SQ)),
        _rule_entry("R-THM4b", _ops(UNI, A=_SQ, B="diag(per(2; 1, -1))")),
        _rule_entry("R-THM5a", _ops(UNI, A="diag(per(2; 1, -1))", B=_ISQ)),
        _rule_entry("R-THM5b", _ops(BI, A="diag(coeff(0,1,1) * exp(2))", B="diag(per(2; 1, -1))")),
        _rule_entry("R-THM5-2", _ops(BI, A="shift(1)", B="diag(per(2; 5, coeff(3,4,1)))")),
        _rule_entry("R-THM5-2R", _ops(BI, A="shift(-1)", B="diag(coeff(0,2,1))")),
        _rule_entry("R-NCLOSE", _ops(UNI, A=_ISQ, B=_PER)),
        _rule_entry("R-DNVN", _ops(UNI, T=_SQ, P=_LIN, Q=_LIN)),
        _rule_entry("R-BINV-NORM", _ops(UNI, A=_ISQ, B=_PER)),
        _rule_entry("R-PRO-AINV", _ops(UNI, A=_PER, B=_ISQ)),
        _rule_entry("R-EXMAD", _ops(UNI, A=_SQ, B="diag(per(2; 1, coeff(0,1,1)))")),
        _rule_entry("R-THM7", _with_polar(_ops(BI, A="diag(coeff(0,1,1) * exp(2))",
                                               B="diag(per(2; 2, coeff(0,3,1)))"))),
        _rule_entry("R-COR3", _with_polar(_ops(BI, A="diag(coeff(3,4,1) * exp(2))",
                                               B="diag(per(2; -1, coeff(0,1,2)))"))),
        _rule_entry("R-FP", _ops(UNI, K=_PER, N="diag(coeff(0,1,1) * pow(1,1))",
                                 M="diag(coeff(0,1,1) * pow(1,1))")),
        _rule_entry("R-PROP2-1", _ops(UNI, A=_LIN, B=_PER + " on dom(pow(1,3))")),
        _rule_entry("R-PROP2-2", _ops(UNI, A=_SQ, B=_LIN)),
        _rule_entry("R-PROP3-1", lin2),
        _rule_entry("R-PROP3-2", _ops(UNI, A=_LIN, B=_A1)),
        _rule_entry("R-THM10", _ops(UNI, T=_SQ, B="diag(pow(1,1)).shift(1)")),
        _rule_entry("R-LEM3-1", ex1),
        _rule_entry("R-LEM3-2", _ops(UNI, A=_LIN, B=_PER + " on dom(pow(1,3))")),
        _rule_entry("R-LEM3-3", lin2),
        _rule_entry("R-LEM3-4", lin2),
        _rule_entry("R-LEM4", lin2),
        _rule_entry("R-PROP4", _ops(BI, T="diag(coeff(3,4,1)).shift(1)")),
        _rule_entry("R-THM12", _ops(UNI, A=_LIN, B=_PER)),
        _rule_entry("R-PROP5", _ops(UNI, A="diag(coeff(0,1,1) * pow(1,1))", B=_PER)),
        _rule_entry("R-THM13", _ops(UNI, A="diag(coeff(0,1,1) * pow(1,1))", B=_PER)),
        _rule_entry("R-THM14", _ops(UNI, A=_ISQ, B=_PER)),
        _rule_entry("R-THM15", _ops(UNI, A=_ISQ, B="diag(per(3; 1, coeff(0,2,1), -3))")),
        _rule_entry("R-COR-PERM", _ops(UNI, A=_SQ, B=_PER)),
    ]
    return entries


def _searched_entry(r: Rule, seed: int, tries: int = 60) -> CatalogEntry:
    """First seeded random instance whose premises all hold."""
    rng = random.Random(f"{seed}:catalog:{r.id}")
    env = None
    for _ in range(tries):
        try:
            cand = instantiate_rule(r, rng)
        except (OperatorError, SymbolError):
            continue
        env = env or cand
        if check_instance(r, cand).failing_premise is None:
            env = cand
            break
    if env is None:
        env = {v: MonomialOperator.identity() for v in r.variables}
    return _rule_entry(r.id, env, "witness from a seeded search")


def catalog(seed: int = 0) -> list[CatalogEntry]:
    entries = _named_entries(seed) + _hand_entries()
    covered = {e.id for e in entries}
    for r in rulebook():
        if r.id not in covered:
            entries.append(_searched_entry(r, seed))
    return sorted(entries, key=lambda e: e.id)
