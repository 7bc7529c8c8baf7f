import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import example
from helpers import names
from hkb.core import UnknownPredicateError, atom
from hkb.grounding import ground
from hkb.lab.corpus import ddb_corpus, kb_corpus
from hkb.parser import parse_atom, parse_clause, parse_program
from hkb.semantics import (
    entails,
    kb_equivalent,
    least_herbrand_model,
    naive_model,
    semi_naive_model,
    violated_constraints,
)


def test_model_ex12(ex12):
    assert names(least_herbrand_model(ex12).atoms) == ["e", "f"]


def test_model_facts_only():
    assert names(least_herbrand_model(parse_program("[EDB] a. b.")).atoms) == ["a", "b"]


def test_model_alg67():
    assert names(least_herbrand_model(example("alg67")).atoms) == ["f", "g"]


def test_model_tweety():
    m = names(least_herbrand_model(example("tweety")).atoms)
    assert "flies(opus)" in m and "flies(tweety)" not in m and "ab(tweety)" in m


def test_entails_ex12(ex12):
    assert not entails(ex12, atom("p"))
    assert entails(ex12.with_edb({atom("a"), atom("e"), atom("f")}), atom("p"))


def test_entails_empty_kb():
    kb = parse_program("")
    assert not entails(kb, atom("p"), strict=False)
    with pytest.raises(UnknownPredicateError):
        entails(kb, atom("p"))


def test_violations():
    assert not violated_constraints(parse_program("[IDB] p :- a. [IC] :- b.")).violated
    v = violated_constraints(parse_program("[EDB] b. [IC] :- b."))
    assert [str(c) for c in v.violated] == [":- b."]


def test_staff_second_chair_violates_both_constraints():
    kb = example("staff")
    kb = kb.with_edb(kb.edb | {parse_atom("group_chair(infor1,gerhard)")})
    assert len(violated_constraints(kb).violated) == 2


def test_kb_equivalent():
    kb = parse_program("p :- q.")
    assert kb_equivalent(kb, parse_clause("p"), parse_clause("p"))
    assert not kb_equivalent(kb, parse_clause("p"), parse_clause("q"))
    assert not kb_equivalent(parse_program("p :- q."), parse_clause("r"), parse_clause("s"))


def _rules(kb):
    return ground(kb).rules


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_model_is_closed_and_minimal(seed):
    kb = kb_corpus(seed, 1)[0].kb
    m = least_herbrand_model(kb).atoms
    for r in _rules(kb):
        if all((l.atom in m) != l.negated for l in r.body):
            assert r.head in m
    if all(not l.negated for r in _rules(kb) for l in r.body):
        for a in m - kb.edb:
            rest = m - {a}
            assert any(r.head == a and all(l.atom in rest for l in r.body) for r in _rules(kb))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_semi_naive_matches_naive(seed):
    kb = kb_corpus(seed, 1)[0].kb
    assert semi_naive_model(kb) == naive_model(kb)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from("abcdef"))
def test_entailment_monotone_for_definite(seed, extra):
    ddb, goal, _ = ddb_corpus(seed, 1)[0]
    if entails(ddb, goal):
        assert entails(ddb.with_edb(ddb.edb | {atom(extra)}), goal)
