import pytest

from conftest import example
from helpers import family, names
from hkb.abduction import locally_minimal_explanations
from hkb.lab.corpus import ddb_corpus
from hkb.lab.vusweep import run_sweep
from hkb.parser import parse_atom, parse_program
from hkb.semantics import least_herbrand_model, violated_constraints
from hkb.viewupdate import (
    ALGOS,
    NON_GROUND,
    ImpossibleUpdateError,
    TransactionError,
    UpdateTransaction,
    apply_transaction,
    brute_supports,
    check_transaction,
    cut_lemma,
    derivation_supports,
    edb_cuts,
    materialized_tableau,
    minimality_filter,
    update_tableau,
    view_update,
)

# checks with known, ledgered counterexamples; pinned below and in the acceptance file
KNOWN = {"postulates materialized KB*7.3", "materialized cuts covered", "impossible confirmed tableau"}
COUNTER = "[IDB] p :- f, e. p :- f. [EDB] e. f."


def strs(txns) -> list:
    return [str(t) for t in txns]


def edb_after(ddb, txns) -> list:
    return names(apply_transaction(ddb, txns[0]).edb)


@pytest.mark.parametrize("algo", ALGOS)
def test_ex12(ex12, algo):
    txns = view_update(ex12, parse_atom("p"), "insert", algo)
    assert strs(txns) == ["+{a} -{}"]
    assert edb_after(ex12, txns) == ["a", "e", "f"]


@pytest.mark.parametrize("algo", ALGOS)
def test_alg45(algo):
    ddb = example("alg45", ddb=True)
    assert strs(view_update(ddb, parse_atom("p"), "insert", algo)) == ["+{e} -{}", "+{g} -{}"]
    merged = view_update(ddb, parse_atom("p"), "insert", algo, union=True)
    assert strs(merged) == ["+{e, g} -{}"]
    assert edb_after(ddb, merged) == ["a", "e", "f", "g"]


@pytest.mark.parametrize("algo", ALGOS)
def test_alg67(algo):
    ddb = example("alg67", ddb=True)
    txns = view_update(ddb, parse_atom("p"), "insert", algo)
    assert strs(txns) == ["+{a} -{}"] and edb_after(ddb, txns) == ["a", "f", "g"]


@pytest.mark.parametrize("algo", ALGOS)
def test_staff_delete(algo):
    ddb = example("staff", ddb=True)
    txns = view_update(ddb, parse_atom("staff_chair(delhibabu,matthias)"), "delete", algo)
    assert strs(txns) == ["+{} -{group_chair(infor1,matthias)}", "+{} -{staff_group(delhibabu,infor1)}"]


@pytest.mark.parametrize("algo", ALGOS)
def test_staff_insert(algo):
    ddb = example("staff", ddb=True)
    txns = view_update(ddb, parse_atom("staff_chair(aravindan,gerhard)"), "insert", algo)
    assert str(txns[0]) == "+{staff_group(aravindan,infor2)} -{}"
    fresh = [t for t in txns if t.flags]
    assert len(fresh) == (0 if algo == "sld" else 1)
    assert all(t.flags == (NON_GROUND,) for t in fresh)


def test_first_solution_only(ex12):
    assert len(view_update(example("alg45", ddb=True), parse_atom("p"), "insert", "sld", all_solutions=False)) == 1


def test_already_satisfied(ex12):
    (t,) = view_update(ex12, parse_atom("e"), "insert")
    assert t.is_empty() and t.provenance.endswith("already-satisfied")


def test_impossible():
    ddb = parse_program("[IDB] p :- b. [EDB] a. [IC] :- b.", ddb=True)
    with pytest.raises(ImpossibleUpdateError):
        view_update(ddb, parse_atom("p"), "insert")


def test_bad_arguments(ex12):
    with pytest.raises(Exception, match="mode"):
        view_update(ex12, parse_atom("p"), "upsert")
    with pytest.raises(Exception, match="unknown algorithm"):
        view_update(ex12, parse_atom("p"), "insert", "magic")


def test_apply_transaction(ex12):
    assert apply_transaction(ex12, UpdateTransaction()) == ex12
    t = UpdateTransaction(frozenset({parse_atom("a")}))
    assert names(apply_transaction(ex12, t).edb) == ["a", "e", "f"]
    with pytest.raises(TransactionError, match="missing fact"):
        apply_transaction(ex12, UpdateTransaction(deletions=frozenset({parse_atom("a")})))
    with pytest.raises(TransactionError, match="stored fact"):
        apply_transaction(ex12, UpdateTransaction(frozenset({parse_atom("e")})))
    with pytest.raises(TransactionError):
        UpdateTransaction(frozenset({parse_atom("a")}), frozenset({parse_atom("a")}))


@pytest.mark.parametrize("algo", ALGOS)
def test_checks_pass_on_goldens(ex12, algo):
    (t,) = view_update(ex12, parse_atom("p"), "insert", algo)
    assert check_transaction(ex12, parse_atom("p"), "insert", t, algo).passed()


def test_tableau_checks_strong_relevance(ex12):
    (t,) = view_update(ex12, parse_atom("p"), "insert", "tableau")
    names_checked = [v.name for v in check_transaction(ex12, parse_atom("p"), "insert", t, "tableau").verdicts]
    assert "KB*7.1" in names_checked


# materialized relevance counterexample ---------------------------------------------


def test_materialized_extra_cut():
    ddb = parse_program(COUNTER, ddb=True)
    p = parse_atom("p")
    assert strs(view_update(ddb, p, "delete", "materialized")) == ["+{} -{f}", "+{} -{e, f}"]
    assert strs(view_update(ddb, p, "delete", "sld")) == ["+{} -{f}"]
    assert strs(view_update(ddb, p, "delete", "tableau")) == ["+{} -{f}"]
    assert family(materialized_tableau(ddb, p).hitting_sets()) == [["e", "f"], ["f"]]


def test_materialized_extra_cut_fails_relevance():
    ddb = parse_program(COUNTER, ddb=True)
    p = parse_atom("p")
    bad = view_update(ddb, p, "delete", "materialized")[1]
    failures = check_transaction(ddb, p, "delete", bad, "materialized").failures()
    assert [v.name for v in failures] == ["KB*7.3"]
    assert "beta = e." in failures[0].witness


def test_impossible_tableau_only():
    ddb = parse_program("""[IDB] p :- f, c, a. p :- f, b. q :- c, p, e. r :- d, c, e.
                           [EDB] b. d. [IC] :- b, f.""", ddb=True)
    q = parse_atom("q")
    with pytest.raises(ImpossibleUpdateError):
        view_update(ddb, q, "insert", "tableau")
    assert view_update(ddb, q, "insert", "sld")


# invariants ------------------------------------------------------------------------


def test_post_state_correctness():
    for ddb, goal, mode in ddb_corpus(3, 120):
        for algo in ALGOS:
            try:
                txns = view_update(ddb, goal, mode, algo)
            except ImpossibleUpdateError:
                continue
            for t in txns:
                after = apply_transaction(ddb, t)
                assert (goal in least_herbrand_model(after).atoms) == (mode == "insert"), (algo, str(t))
                assert not violated_constraints(after)


def test_insert_idempotence():
    for ddb, goal, mode in ddb_corpus(4, 120):
        if mode != "insert":
            continue
        for algo in ALGOS:
            try:
                t = view_update(ddb, goal, mode, algo)[0]
            except ImpossibleUpdateError:
                continue
            (again,) = view_update(apply_transaction(ddb, t), goal, mode, algo)
            assert again.is_empty()


def test_cut_lemma_and_filter():
    for ddb, goal, mode in ddb_corpus(5, 120):
        if mode != "delete":
            continue
        s = derivation_supports(ddb, goal)
        assert s == brute_supports(ddb, goal)
        t = update_tableau(ddb, goal)
        lemma = cut_lemma(s, edb_cuts(t))
        assert lemma["subset"] and lemma["contains"]
        filtered = family(minimality_filter(t, ddb, goal).hitting_sets())
        try:
            fam = locally_minimal_explanations(ddb, goal, delete=True)
        except Exception:
            continue
        assert sorted(set(map(tuple, filtered))) == sorted({tuple(names(m.minus)) for m in fam if not m.plus})


def test_sweep_only_known_failures():
    report = run_sweep(seed=1, count=150)
    unexpected = {n: report.witnesses[n] for n, (_, f) in report.counts.items() if f and n not in KNOWN}
    assert not unexpected
    assert report.counts["postulates tableau KB*7.1"][1] == 0


@pytest.mark.xfail(strict=True, reason="the materialized tableau emits a non-minimal cut")
def test_materialized_cuts_covered():
    report = run_sweep(seed=1, count=150)
    assert report.counts["materialized cuts covered"][1] == 0
