import re

import pytest

from conftest import example
from helpers import family, names
from hkb.parser import parse_atom, parse_program
from hkb.tableau import (
    BranchExplosionError,
    NotDefiniteError,
    TLit,
    close_branches,
    deletion_hitting_set,
    hyper_tableau,
    transform_idb_bullet,
    transform_idb_star,
    transform_materialized,
)
from hkb.viewupdate import edb_cuts, minimality_filter, update_tableau

E20_STAR = ["¬a ∨ ¬e ← ¬p", "¬a ∨ ¬e ← ¬q", "¬a ∨ ¬f ← ¬p", "¬c ← ¬q"]
E20_BODY = ["p ∨ ¬a ∨ ¬e ←", "q ∨ ¬a ∨ ¬e ←", "p ∨ ¬a ∨ ¬f ←", "q ∨ ¬c ←"]
E20_HEAD = ["← ¬p ∧ a ∧ e", "← ¬q ∧ a ∧ e", "← ¬p ∧ a ∧ f", "← ¬q ∧ c"]
MATVIEW_S = "abcdpq"


def squash(s: str) -> str:
    return re.sub(r"\s+", "", s)


@pytest.fixture
def e20():
    return example("e20", ddb=True)


@pytest.fixture
def matview():
    ddb = example("matview", ddb=True)
    return ddb, transform_materialized(ddb, {parse_atom(x) for x in MATVIEW_S})


def test_e20_idb_star(e20):
    assert transform_idb_star(e20).lines() == E20_STAR


def test_e20_idb_bullet(e20):
    body, head = transform_idb_bullet(e20)
    assert body.lines() == E20_BODY
    assert head.lines() == E20_HEAD


def test_e20_latex(e20):
    got = [squash(s) for s in transform_idb_star(e20).latex_lines()]
    assert got[0] == squash(r"\neg a \lor \neg e \leftarrow \neg p")
    assert squash(transform_idb_bullet(e20)[1].latex_lines()[3]) == squash(r"\leftarrow \neg q \wedge c")


def test_e20_tableau(e20):
    t = update_tableau(e20, parse_atom("p"))
    assert [b.index for b in t.open_branches()] == [1, 2, 3]
    assert family(t.hitting_sets()) == [[], ["a"], ["a"]]
    assert [str(l) for l in t.branches[0].literals] == ["¬p", "¬a"]


def test_e20_minimality_filter(e20):
    t = minimality_filter(update_tableau(e20, parse_atom("p")), e20, parse_atom("p"))
    assert [(b.index, b.reason) for b in t.branches if not b.is_open][:2] == [(1, "minimality"), (2, "minimality")]
    assert family(t.hitting_sets()) == [[]]


def test_matview_transforms(matview):
    _, tm = matview
    assert tm["idb-plus"].lines() == ["¬a ← ¬p", "¬a ← ¬q", "¬c ∨ ¬b ← ¬q", "¬p ← ¬q"]
    assert tm["idb-minus-body"].lines() == ["p ∨ ¬a ←", "q ∨ ¬a ←", "q ∨ ¬c ∨ ¬b ←", "q ∨ ¬p ←"]
    assert tm["idb-minus-head"].lines() == ["← ¬p ∧ a", "← ¬q ∧ a", "← ¬q ∧ c ∧ b", "← ¬q ∧ p"]


def test_matview_tableaux(matview):
    _, tm = matview
    base = deletion_hitting_set({parse_atom(x) for x in "abcd"})
    tp = hyper_tableau(tm["idb-plus"], TLit(parse_atom("p"), True), base)
    assert family(tp.hitting_sets()) == [["a"]]
    tq = hyper_tableau(tm["idb-plus"], TLit(parse_atom("q"), True), base)
    assert family(tq.hitting_sets()) == [["a", "b"], ["a", "c"]]
    assert family(edb_cuts(tq)) == [["a"], ["a", "b"], ["a", "c"], ["b", "c"]]


def test_default_model_reading(matview):
    ddb, _ = matview
    assert transform_materialized(ddb)["idb-minus-head"].lines()[2] == "q ← c ∧ b"


def test_negation_rejected():
    with pytest.raises(NotDefiniteError):
        update_tableau(example("tweety", ddb=True), parse_atom("flies(tweety)"))


def test_node_cap():
    ddb = parse_program("[IDB] p :- a, b, c. p :- d, e, f. p :- a, e. [EDB] a. b. c. d. e. f.", ddb=True)
    with pytest.raises(BranchExplosionError):
        update_tableau(ddb, parse_atom("p"), node_cap=3)


def test_close_branches(e20):
    t = update_tableau(e20, parse_atom("p"))
    closed = close_branches(t, {3}, "test")
    assert [b.index for b in closed.open_branches()] == [1, 2]
    assert closed.branches[2].reason == "test"


def test_branches_are_finished(e20):
    t = update_tableau(e20, parse_atom("q"))
    for b in t.open_branches():
        on = set(b.literals)
        for c in t.clauses:
            if all(l in on for l in c.body):
                assert any(h in on for h in c.head), b.render()
    assert names(frozenset().union(*t.hitting_sets())) == ["a", "c"]
