import json

import numpy as np
import pytest

from opcalc.catalog import (FAIL, PASS, VACUOUS, CatalogEntry, Check, catalog, run_catalog,
                            run_entry)
from opcalc.dsl import parse_fact, parse_term
from opcalc.operators import MonomialOperator
from opcalc.rules import Status, rulebook

from conftest import op


def _entry(entries, eid):
    return next(e for e in entries if e.id == eid)


def test_ids_unique_and_sorted():
    ids = [e.id for e in catalog()]
    assert ids == sorted(set(ids))


def test_witnesses_are_monomials():
    for e in catalog():
        assert e.witnesses
        assert all(isinstance(w, MonomialOperator) for w in e.witnesses.values()), e.id


def test_ex1_strict_inclusion_with_witness():
    res = run_entry(_entry(catalog(), "EX1"))
    assert res.verdict == PASS
    strict = next(c for c in res.checks if c.name == "cmp B * A, A * B")
    assert strict.got == "proper-subset"
    # x_n = 1/(n+1) is in l2 = D(AB), while (1+n^2) x_n is not
    assert strict.witness.startswith("{0: 1, 1: 1/2, 2: 1/3, 3: 1/4,")


def _dense(T: MonomialOperator, n: int) -> np.ndarray:
    """Matrix of T on the bilateral window -n..n, by hand from the symbol."""
    k = T.shift
    M = np.zeros((2 * n + 1, 2 * n + 1), dtype=complex)
    for i in range(-n, n + 1):
        j = i + k
        if -n <= j <= n:
            M[j + n, i + n] = complex(T.weight(j))
    return M


def test_theorem_5_2_witness_products_are_not_normal():
    e = _entry(catalog(), "THM5-2-W")
    res = run_entry(e)
    assert res.verdict == PASS
    A, B = e.witnesses["A"], e.witnesses["B"]
    for X, Y in ((A, B), (B, A)):
        P = _dense(X, 16) @ _dense(Y, 16)
        C = P.conj().T @ P - P @ P.conj().T
        # both products are 2^n-weighted shifts: |a_n|^2 - |a_{n+1}|^2 never vanishes
        interior = np.diag(C)[2:-2]
        assert np.abs(interior).min() > 0
        assert np.abs(interior).max() >= 0.5


def test_constant_modulus_gives_normal_products():
    assert run_entry(_entry(catalog(), "THM5-2-W-CONST")).verdict == PASS


def test_empty_catalog():
    rep = run_catalog([])
    assert rep.main == [] and not rep.failed
    assert json.loads(rep.dumps())["summary"]["total"] == 0


@pytest.fixture(scope="module")
def report():
    return run_catalog(catalog())


def test_full_run_has_no_failures(report):
    rep = report
    bad = [(r.entry.id, [c.to_json() for c in r.checks if not c.ok]) for r in rep.main
           if r.verdict == FAIL]
    assert bad == []


def test_every_sound_rule_has_a_nonvacuous_entry(report):
    rep = report
    witnessed = {rid for r in rep.main if r.verdict == PASS for rid in r.entry.rules}
    sound = {r.id for r in rulebook() if r.status is Status.SOUND}
    assert sound <= witnessed


def test_vacuous_entries_name_their_hypothesis(report):
    rep = report
    vac = [r for r in rep.main if r.verdict == VACUOUS]
    assert any(r.entry.id == "PROP4-W" for r in vac)
    for r in vac:
        assert r.failing_hypothesis
        assert r.failing_hypothesis.startswith(r.checks[-1].name)
    assert _entry_result(rep, "PROP4-W").failing_hypothesis == "dense_range(T) is false"


def _entry_result(rep, eid):
    return next(r for r in rep.main if r.entry.id == eid)


def test_conjectural_entries_are_separate():
    entries = [e for e in catalog() if e.conjectural or e.id == "EX1"]
    plain = run_catalog(entries)
    both = run_catalog(entries, conjectural=True)
    assert not any(r.entry.conjectural for r in plain.main)
    assert {r.entry.id for r in both.conjectural} >= {"R-PROP3-1", "R-PROP3-2"}
    assert [r.entry.id for r in both.main] == [r.entry.id for r in plain.main]


def test_failing_entry_is_reported():
    e = CatalogEntry("X", (), {"A": op("shift(1)")}, (),
                     (Check("fact", (parse_fact("normal(A)"),), "true"),))
    rep = run_catalog([e])
    assert rep.failed and rep.main[0].checks[0].got == "false"


def test_vacuous_entry_stops_at_first_bad_hypothesis():
    e = CatalogEntry("X", (), {"A": op("shift(1)")},
                     (Check("fact", (parse_fact("closed(A)"),), "true"),
                      Check("fact", (parse_fact("selfadjoint(A)"),), "true")),
                     (Check("cmp", (parse_term("A"), parse_term("A")), "equal"),))
    res = run_entry(e)
    assert res.verdict == VACUOUS
    assert res.failing_hypothesis == "selfadjoint(A) is false"
    assert len(res.checks) == 2


def test_json_is_byte_identical():
    a = run_catalog(catalog(seed=3)).dumps()
    b = run_catalog(catalog(seed=3)).dumps()
    assert a == b
    data = json.loads(a)
    assert set(data) == {"entries", "summary"}
    assert data["summary"]["FAIL"] == 0
