import pytest

from conftest import example
from hkb.magic import (
    FRESH_PREFIX,
    NotNormalizableError,
    NotTrueUpdateError,
    is_fresh,
    magic_vu,
    normalize,
)
from hkb.parser import parse_atom, parse_program


def vu_lines(program: str, goal: str, mode: str = "insert") -> list:
    return magic_vu(parse_program(program, ddb=True), parse_atom(goal), mode).lines()


def test_conjunction_rules():
    got = vu_lines("[IDB] p :- q, r. [EDB] s.", "p")
    assert "∇+p ∧ ¬q → ∇+q" in got and "∇+p ∧ ¬r → ∇+r" in got and "∇−p → ∇−q ∨ ∇−r" in got


def test_single_body_delete():
    assert "∇−p → ∇−q" in vu_lines("[IDB] p :- q. [EDB] q.", "p", "delete")


def test_two_rules_give_disjunction():
    got = vu_lines("[IDB] p :- q. p :- r. [EDB] s.", "p")
    assert "∇+p → ∇+q ∨ ∇+r" in got


def test_projection_fresh_constant():
    vu = magic_vu(parse_program("[IDB] p(X) :- q(X, Y). [EDB] q(c2, c1).", ddb=True), parse_atom("p(c1)"))
    assert vu.fresh == (f"{FRESH_PREFIX}1",)
    assert str(vu.clauses[0]) == "∇+p_p#1(c1,c1) ∨ ∇+p_p#1(c1,c2) ∨ ∇+p_p#1(c1,@new1) ← ∇+p(c1)"
    assert [is_fresh(d.atom) for d in vu.clauses[0].head] == [False, False, True]
    assert str(vu.clauses[-1]) == "∇+q(c1,@new1) ← ∇+p_p#1(c1,@new1)"
    assert any("c_new" in line for line in vu.lines())


def test_seed_and_relevant_instances(ex12):
    vu = magic_vu(ex12, parse_atom("p"))
    assert [str(s) for s in vu.seeds] == ["∇+p"]
    clauses = [str(c) for c in vu.clauses]
    assert clauses[0] == "∇+p_r#1 ∨ ∇+p_or#2 ← ∇+p"
    assert "∇+a ← ∇+p_r#1" in clauses
    assert not any("∇+e" in c or "∇+f" in c for c in clauses)


def test_normalized_bodies_are_short(ex12):
    norm, aux = normalize(ex12)
    assert all(len(r.body) <= 2 for r in norm.rules)
    by_head = {}
    for r in norm.rules:
        by_head.setdefault(r.head.predicate, []).append(r)
    assert all(len(rs) <= 2 for rs in by_head.values())
    assert {p.name for p in aux}.isdisjoint({"p", "q"})


def test_staff_projection():
    vu = magic_vu(example("staff", ddb=True), parse_atom("staff_chair(aravindan,gerhard)"))
    assert vu.fresh == ("@new1",)
    first = [str(d) for d in vu.clauses[0].head]
    assert len(first) == 7 and first[-1] == "∇+staff_chair_p#1(aravindan,gerhard,@new1)"


def test_not_true_update(ex12):
    with pytest.raises(NotTrueUpdateError):
        magic_vu(ex12, parse_atom("e"), "insert")
    with pytest.raises(NotTrueUpdateError):
        magic_vu(ex12, parse_atom("p"), "delete")


@pytest.mark.parametrize("program", [
    "[IDB] p(X) :- q(X), X != a. [EDB] q(b).",
    "[IDB] p(X, X) :- q(X). [EDB] q(b).",
])
def test_not_normalizable(program):
    with pytest.raises(NotNormalizableError):
        normalize(parse_program(program, ddb=True))
