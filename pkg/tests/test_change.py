import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import names
from hkb.change import (
    UnhittableError,
    kernel_outcomes,
    kernel_revision,
    kernels,
    minimal_hitting_sets,
    partial_meet_outcomes,
    partial_meet_revision,
    remainders,
    strategy,
)
from hkb.core import atom, fact
from hkb.lab.corpus import kb_corpus
from hkb.lab.oracles import oracle_kernels, oracle_remainders
from hkb.lab.postulates import NAMES, check_revision_postulates
from hkb.parser import parse_clause, parse_program
from hkb.semantics import consistent_with

CORRECTED = "[IDB] p :- a, b. p :- a. q :- a, b. [EDB] a. b."
STRATS = ("minimal", "full-meet", "maxichoice")
CHECKED = NAMES[:8] + ("KB*7.3",)


@pytest.fixture
def corrected():
    return parse_program(CORRECTED), parse_clause(":- p.")


def strs(clauses) -> list:
    return sorted(str(c) for c in clauses)


def definite_consistent(kb) -> bool:
    return all(not l.negated for c in kb.rules for l in c.body) and consistent_with(kb)


# worked example ---------------------------------------------------------------


def test_remainders(corrected):
    kb, alpha = corrected
    assert [strs(m) for m in remainders(kb, alpha).members] == [["b.", "p :- a, b.", "p :- a.", "q :- a, b."]]


def test_kernels(corrected):
    kb, alpha = corrected
    assert [strs(m) for m in kernels(kb, alpha).members] == [["a.", "p :- a."], ["a.", "b.", "p :- a, b."]]


def test_kernel_minimal_keeps_b(corrected):
    kb, alpha = corrected
    out = kernel_revision(kb, alpha, strategy("minimal"))
    assert names(c.head for c in out.updatable) == ["b"]
    assert ":- p." in strs(out.constraints)


def test_kernel_maximal_removes_both(corrected):
    kb, alpha = corrected
    assert kernel_revision(kb, alpha, strategy("maximal")).updatable == ()


@pytest.mark.parametrize("s", ("minimal", "maximal", "full-meet", "maxichoice"))
def test_partial_meet_keeps_b(corrected, s):
    kb, alpha = corrected
    assert strs(partial_meet_revision(kb, alpha, strategy(s)).updatable) == ["b."]


def test_hitting_sets():
    a, e, f = (fact(atom(x)) for x in "aef")
    hs = minimal_hitting_sets([{a, e}, {a, f}], {a, e, f})
    assert [h.names() for h in hs] == [["a."], ["e.", "f."]]
    assert [h.names() for h in minimal_hitting_sets([], {a})] == [[]]


def test_unhittable_member():
    a, b = fact(atom("a")), fact(atom("b"))
    with pytest.raises(UnhittableError, match="has no updatable element"):
        minimal_hitting_sets([{a, b}], {a, b}, protected={a, b})


def test_unknown_strategy():
    with pytest.raises(ValueError):
        strategy("nope")


def test_inadmissible_alpha_leaves_kb():
    kb = parse_program("[IDB] p :- a. [EDB] a. [IC] :- q.")
    alpha = parse_clause("q.")
    assert kernel_revision(kb, alpha, strategy("minimal")) == kb
    assert partial_meet_revision(kb, alpha, strategy("minimal")) == kb


# oracles ----------------------------------------------------------------------


@pytest.mark.parametrize("seed", (0, 3))
def test_families_match_oracle(seed):
    for inst in kb_corpus(seed, 60):
        rem = [frozenset(m) for m in remainders(inst.kb, inst.alpha).members]
        ker = [frozenset(m) for m in kernels(inst.kb, inst.alpha).members]
        assert rem == oracle_remainders(inst.kb, inst.alpha), inst.label
        assert ker == oracle_kernels(inst.kb, inst.alpha), inst.label


def test_remainder_kernel_duality():
    for inst in kb_corpus(5, 80):
        kb, alpha = inst.kb, inst.alpha
        everything = frozenset(kb.all_clauses())
        ker = kernels(kb, alpha).members
        for m in remainders(kb, alpha).members:
            if frozenset(m) == everything:
                continue
            gone = everything - frozenset(m)
            assert all(gone & frozenset(k) for k in ker), inst.label


def test_hitting_sets_minimal_and_complete():
    for inst in kb_corpus(7, 80):
        kb = inst.kb
        ker = kernels(kb, inst.alpha).members
        upd = set(kb.updatable)
        if not all(set(k) & upd for k in ker if k):
            continue
        hs = [h.elements for h in minimal_hitting_sets(ker, upd, kb.immutable)]
        for h in hs:
            assert all(h & set(k) for k in ker if k)
            assert not any(o < h for o in hs)


def test_named_strategies_within_partial_meet_class():
    for inst in kb_corpus(2, 120):
        pm = partial_meet_outcomes(inst.kb, inst.alpha, "all")
        for key in kernel_outcomes(inst.kb, inst.alpha, "minimal"):
            assert key in pm, inst.label


# postulates -------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 29), st.sampled_from(STRATS),
       st.sampled_from((kernel_revision, partial_meet_revision)))
def test_change_ops_satisfy_postulates(seed, i, s, op):
    inst = kb_corpus(seed, 30)[i]
    if not definite_consistent(inst.kb):
        return
    strat = strategy(s)
    after = op(inst.kb, inst.alpha, strat)
    rep = check_revision_postulates(inst.kb, inst.alpha, after, operator=lambda k, b: [op(k, b, strat)],
                                    names=CHECKED)
    assert rep.passed(), (inst.label, rep.failures())


def test_maximal_incision_fails_relevance():
    kb = parse_program("""
        [IDB] r :- b. e :- b, d. q :- d. p :- e, c, b. d :- a. r :- f, q, d.
        [EDB] b. q. d. f.
        [IC] :- p, e. :- r, f.""")
    alpha = parse_clause(":- r, f.")
    strat = strategy("maximal")
    after = kernel_revision(kb, alpha, strat)
    assert after.updatable == ()
    rep = check_revision_postulates(kb, alpha, after, operator=lambda k, b: [kernel_revision(k, b, strat)],
                                    names=("KB*7.3",))
    assert [v.name for v in rep.failures()] == ["KB*7.3"]
