import itertools
import warnings

import pytest

from conftest import example
from helpers import family, names
from hkb.abduction import (
    DepthCutWarning,
    NoExplanationError,
    branch_deltas,
    build_sld_tree,
    explain_update,
    locally_minimal_explanations,
    minimal_explanations,
)
from hkb.core import KnowledgeBase
from hkb.lab.corpus import ddb_corpus
from hkb.parser import parse_atom, parse_program
from hkb.semantics import least_herbrand_model, violated_constraints

IC_ORDERS = ("check-first", "check-last")


def strs(fam) -> list:
    return [str(m) for m in fam]


# SLD trees and deltas -----------------------------------------------------------


def test_branch_deltas_ex12(ex12):
    bd = branch_deltas(build_sld_tree(ex12, parse_atom("p")), ex12)
    assert [names(d) for d in bd.delta_i] == [["a", "e"], ["a", "f"], ["a"]]
    assert bd.delta_j == ()


def test_branch_deltas_alg45():
    kb = example("alg45")
    bd = branch_deltas(build_sld_tree(kb, parse_atom("p")), kb)
    assert [names(d) for d in bd.delta_i] == [["a", "e"], ["a", "g"]]
    assert names(bd.union_i) == ["a", "e", "g"]


def test_branch_deltas_empty():
    kb = parse_program("[IDB] p :- q. q :- p. [IC] :- p.")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DepthCutWarning)
        bd = branch_deltas(build_sld_tree(kb, parse_atom("p"), depth_limit=4), kb)
    assert (bd.delta_i, bd.delta_j) == ((), ())


def test_depth_cut_warns():
    kb = parse_program("[IDB] p :- q. q :- r. r :- s. s :- t. t :- a.")
    with pytest.warns(DepthCutWarning):
        tree = build_sld_tree(kb, parse_atom("p"), depth_limit=4)
    assert tree.depth_cut


def test_stored_fact_branch():
    kb = parse_program("[IDB] p :- e. [EDB] e.")
    (b,) = build_sld_tree(kb, parse_atom("p"), abduce=False).success()
    assert [str(r) for r in b.rules] == ["p :- e."]
    assert names(b.facts) == ["e"]


def test_no_matching_heads():
    kb = parse_program("[IDB] p :- a. [EDB] a.")
    assert build_sld_tree(kb, parse_atom("q"), abduce=False).success() == []


# explanations --------------------------------------------------------------------


@pytest.mark.parametrize("order", IC_ORDERS)
def test_ex12_insert(ex12, order):
    assert strs(locally_minimal_explanations(ex12, parse_atom("p"), order)) == ["<+{a}, -{}>"]


@pytest.mark.parametrize("order", IC_ORDERS)
def test_alg45_insert(order):
    fam = locally_minimal_explanations(example("alg45"), parse_atom("p"), order)
    assert strs(fam) == ["<+{e}, -{}>", "<+{g}, -{}>"]


def test_locally_minimal_not_minimal():
    kb = parse_program("[IDB] p :- q, a. p :- a.")
    fam = locally_minimal_explanations(kb, parse_atom("p"))
    assert strs(fam) == ["<+{a, q}, -{}>", "<+{a}, -{}>"]
    assert strs(minimal_explanations(fam)) == ["<+{a}, -{}>"]


@pytest.mark.parametrize("order", IC_ORDERS)
def test_closed_explanation_support(order):
    (m,) = locally_minimal_explanations(example("sec61"), parse_atom("p"), order)
    assert str(m) == "<+{c, d}, -{}>"
    assert names(m.support) == ["a", "c", "d"]


def test_check_last_filters_ic_branches():
    fam = locally_minimal_explanations(example("sec61"), parse_atom("p"), "check-last")
    assert {reason for reason, _ in fam.filtered} == {"ic"}


def test_already_entailed():
    kb = parse_program("[IDB] p :- e. [EDB] e.")
    assert strs(locally_minimal_explanations(kb, parse_atom("p"))) == ["<+{}, -{}>"]


def test_no_explanation():
    kb = parse_program("[IDB] p :- b. [IC] :- b.")
    with pytest.raises(NoExplanationError):
        locally_minimal_explanations(kb, parse_atom("p"))


def test_staff_insert_includes_join():
    fam = locally_minimal_explanations(example("staff"), parse_atom("staff_chair(aravindan,gerhard)"))
    assert "<+{staff_group(aravindan,infor2)}, -{}>" in strs(fam)
    assert all(not violated_constraints(example("staff").with_edb(m.apply(example("staff").edb))) for m in fam)


def test_staff_delete():
    fam = locally_minimal_explanations(example("staff"), parse_atom("staff_chair(delhibabu,matthias)"), delete=True)
    assert strs(fam) == ["<+{}, -{group_chair(infor1,matthias)}>", "<+{}, -{staff_group(delhibabu,infor1)}>"]


def test_tweety_negation():
    kb = example("tweety")
    assert strs(locally_minimal_explanations(kb, parse_atom("flies(tweety)"))) == ["<+{}, -{broken_wing(tweety)}>"]
    fam = locally_minimal_explanations(kb, parse_atom("flies(opus)"), delete=True)
    assert strs(fam) == ["<+{}, -{bird(opus)}>", "<+{broken_wing(opus)}, -{}>"]


def test_explain_update_tweety():
    kb = example("tweety")
    after = kb.with_edb(kb.edb - {parse_atom("broken_wing(tweety)")})
    assert family(explain_update(kb, after, parse_atom("flies(tweety)"))) == [["bird(tweety)"]]


def test_explain_update_ex12(ex12):
    after = ex12.with_edb(ex12.edb | {parse_atom("a")})
    assert family(explain_update(ex12, after, parse_atom("p"))) == [["a"], ["b", "e"], ["b", "f"]]


def test_explain_update_fact_and_underivable():
    kb = parse_program("[IDB] p :- a. [EDB] e.")
    assert family(explain_update(kb, kb, parse_atom("e"))) == [["e"]]
    assert explain_update(kb, kb, parse_atom("p")) == []


# invariants over the corpus ---------------------------------------------------------


def corpus_families(seed, count):
    for ddb, goal, mode in ddb_corpus(seed, count):
        try:
            yield ddb, goal, mode, locally_minimal_explanations(ddb, goal, delete=(mode == "delete"))
        except NoExplanationError:
            continue


def test_soundness():
    for ddb, goal, mode, fam in corpus_families(11, 150):
        for m in fam:
            after = ddb.with_edb(m.apply(ddb.edb))
            assert (goal in least_herbrand_model(after).atoms) == (mode == "insert"), (goal, mode, str(m))
            assert not violated_constraints(after)


def test_ic_order_invariance():
    for ddb, goal, mode in ddb_corpus(12, 150):
        if mode != "insert":
            continue
        got = []
        for order in IC_ORDERS:
            try:
                got.append(locally_minimal_explanations(ddb, goal, order).pairs())
            except NoExplanationError:
                got.append(None)
        assert got[0] == got[1], goal


def test_local_minimality_brute_force():
    for ddb, goal, mode, fam in corpus_families(13, 150):
        if mode != "insert":
            continue
        for m in fam:
            if not m.rules:
                continue
            local = KnowledgeBase(tuple(m.rules), ())
            assert goal in least_herbrand_model(local.with_edb(m.support)).atoms
            for r in range(len(m.support)):
                for smaller in itertools.combinations(m.support, r):
                    assert goal not in least_herbrand_model(local.with_edb(smaller)).atoms, str(m)
