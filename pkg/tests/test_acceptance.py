"""Acceptance criteria 1-11, one pass/fail line each in the terminal summary.

A criterion is a set of parts. Parts that are known not to hold are
xfail(strict=True): the suite stays green, the criterion line says FAIL and
names the failing part. Run directly with `python3 tests/test_acceptance.py`.
"""

import sys
import time

import pytest

from conftest import EXAMPLES, example
from helpers import family, names
from hkb.abduction import branch_deltas, build_sld_tree, locally_minimal_explanations
from hkb.change import kernel_outcomes, kernels, partial_meet_outcomes, remainders
from hkb.lab.corpus import ddb_corpus, kb_corpus
from hkb.lab.oracles import oracle_kernels, oracle_remainders
from hkb.lab.postulates import check_revision_postulates
from hkb.lab.suite import run_suite
from hkb.lab.vusweep import run_sweep
from hkb.parser import parse_atom, parse_clause, parse_program, serialize
from hkb.revision import generalized_revision
from hkb.tableau import transform_idb_bullet, transform_idb_star
from hkb.viewupdate import ALGOS, alpha_for, apply_transaction, minimality_filter, update_tableau, view_update

TITLES = {
    1: "sec61 revision golden",
    2: "ex12 insertion golden",
    3: "alg45 union golden",
    4: "alg67 materialized golden",
    5: "e20 transformations and tableau",
    6: "kernel and partial-meet outcome classes",
    7: "postulate compliance of emitted transactions",
    8: "strong minimality equals groundedness",
    9: "EDB-cut lemmas and hitting-set transfer",
    10: "abductive-framework oracle suite",
    11: "parser round trip",
}

# criterion -> {part: passed}
RESULTS = {n: {} for n in TITLES}

STRICT_FAIL = pytest.mark.xfail(strict=True, reason="known counterexample; see the decision ledger")


def record(n, part, ok):
    RESULTS[n][part] = bool(ok)
    return ok


def summary_lines() -> list:
    out = []
    for n, title in TITLES.items():
        parts = RESULTS[n]
        if not parts:
            out.append(f"criterion {n:>2}: NOT RUN  {title}")
            continue
        bad = [p for p, ok in parts.items() if not ok]
        tag = "PASS" if not bad else "FAIL"
        out.append(f"criterion {n:>2}: {tag}  {title}" + (f"  (failing: {'; '.join(bad)})" if bad else ""))
    return out


def timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


@pytest.fixture(scope="module")
def sweep():
    return run_sweep(seed=1, count=200)


def failures(report, name) -> int:
    return report.counts[name][1]


# 1-4 goldens ---------------------------------------------------------------------


def test_c1_alg1_golden():
    kb = example("sec61")
    out, secs = timed(lambda: generalized_revision(kb, parse_clause("p.")))
    ok = (names(out.kb_after.edb) == ["a", "c", "d", "r"] and names(out.explanation.plus) == ["c", "d"]
          and names(out.explanation.support) == ["a", "c", "d"] and not out.explanation.minus
          and "Delta+ = {a, c, d} and Delta- = {}" in out.render_trace() and secs < 1)
    assert record(1, "KB_U* and trace", ok)


def test_c2_example12_golden():
    def go():
        ddb = example("ex12", ddb=True)
        p = parse_atom("p")
        fams = [locally_minimal_explanations(ddb, p, o).pairs() for o in ("check-first", "check-last")]
        txn = view_update(ddb, p, "insert", "sld")[0]
        bd = branch_deltas(build_sld_tree(ddb, p), ddb)
        return fams, names(apply_transaction(ddb, txn).edb), [names(d) for d in bd.delta_i]

    (fams, edb, delta_i), secs = timed(go)
    ok = edb == ["a", "e", "f"] and ["a", "e"] in delta_i and fams[0] == fams[1] and secs < 1
    assert record(2, "EDB', delta_i and ic orders", ok)


def test_c3_alg45_golden():
    def go():
        ddb = example("alg45", ddb=True)
        p = parse_atom("p")
        edbs, strong = [], True
        for algo in ALGOS:
            (u,) = view_update(ddb, p, "insert", algo, union=True)
            edbs.append(names(apply_transaction(ddb, u).edb))
            for t in view_update(ddb, p, "insert", algo):
                rep = check_revision_postulates(ddb, alpha_for(p, "insert"), apply_transaction(ddb, t),
                                                names=("KB*7.1",))
                strong = strong and rep.passed()
        return edbs, strong

    (edbs, strong), secs = timed(go)
    ok = all(e == ["a", "e", "f", "g"] for e in edbs) and strong and secs < 1
    assert record(3, "union EDB' and KB*7.1", ok)


def test_c4_alg67_golden():
    def go():
        ddb = example("alg67", ddb=True)
        p = parse_atom("p")
        out, relevant = [], True
        for algo in ALGOS:
            for t in view_update(ddb, p, "insert", algo):
                after = apply_transaction(ddb, t)
                out.append(names(after.edb))
                rep = check_revision_postulates(ddb, alpha_for(p, "insert"), after, names=("KB*7.3",))
                relevant = relevant and rep.passed()
        return out, relevant

    (edbs, relevant), secs = timed(go)
    ok = edbs and all(e == ["a", "f", "g"] for e in edbs) and relevant and secs < 1
    assert record(4, "EDB' and KB*7.3", ok)


# 5 E20 ----------------------------------------------------------------------------


E20_STAR = ["¬a ∨ ¬e ← ¬p", "¬a ∨ ¬e ← ¬q", "¬a ∨ ¬f ← ¬p", "¬c ← ¬q"]
E20_BODY = ["p ∨ ¬a ∨ ¬e ←", "q ∨ ¬a ∨ ¬e ←", "p ∨ ¬a ∨ ¬f ←", "q ∨ ¬c ←"]
E20_HEAD = ["← ¬p ∧ a ∧ e", "← ¬q ∧ a ∧ e", "← ¬p ∧ a ∧ f", "← ¬q ∧ c"]


def squash(lines) -> list:
    return ["".join(s.split()) for s in lines]


def test_c5_e20_transforms():
    ddb = example("e20", ddb=True)
    body, head = transform_idb_bullet(ddb)
    ok = (squash(transform_idb_star(ddb).lines()) == squash(E20_STAR) and squash(body.lines()) == squash(E20_BODY)
          and squash(head.lines()) == squash(E20_HEAD))
    assert record(5, "transformations", ok)


@STRICT_FAIL
def test_c5_e20_hitting_sets():
    ddb = example("e20", ddb=True)
    got = family(update_tableau(ddb, parse_atom("p")).hitting_sets())
    # the tableau has open branches with {a}, {a} and {}
    assert record(5, "open-branch hitting sets {a} and {f,a}", sorted(map(tuple, got)) == [("a",), ("a", "f")])


@STRICT_FAIL
def test_c5_e20_filter():
    ddb = example("e20", ddb=True)
    p = parse_atom("p")
    t = update_tableau(ddb, p)
    f = minimality_filter(t, ddb, p)
    target = frozenset({parse_atom("a"), parse_atom("f")})
    eliminated = any(b.hitting_set == target for b in t.open_branches()) and target not in f.hitting_sets()
    assert record(5, "{f,a} eliminated by the filter", eliminated and [["a"]] == family(f.hitting_sets()))


# 6 outcome classes ------------------------------------------------------------------


CORPUS6 = dict(seed=0, count=200)


def test_c6_families_match_oracle():
    key = lambda fam: sorted(sorted(map(str, m)) for m in fam)
    ok = all(key(remainders(i.kb, i.alpha).members) == key(oracle_remainders(i.kb, i.alpha))
             and key(kernels(i.kb, i.alpha).members) == key(oracle_kernels(i.kb, i.alpha))
             for i in kb_corpus(**CORPUS6))
    assert record(6, "families vs oracle", ok)


@STRICT_FAIL
def test_c6_outcome_classes_coincide():
    bad = [i.label for i in kb_corpus(**CORPUS6)
           if set(kernel_outcomes(i.kb, i.alpha, "all")) != set(partial_meet_outcomes(i.kb, i.alpha, "all"))]
    # five counterexamples, the first kb0-107
    assert record(6, "class equivalence (zero counterexamples)", not bad), bad


# 7 postulates ---------------------------------------------------------------------


def test_c7_sld_and_tableau(sweep):
    names7 = [n for n in sweep.counts if n.startswith("postulates sld") or n.startswith("postulates tableau")]
    ok = "postulates tableau KB*7.1" in names7 and all(failures(sweep, n) == 0 for n in names7)
    assert record(7, "sld and tableau", ok)


def test_c7_materialized_core(sweep):
    core = [n for n in sweep.counts if n.startswith("postulates materialized") and not n.endswith("KB*7.3")]
    assert record(7, "materialized KB*1-KB*6", len(core) == 8 and all(failures(sweep, n) == 0 for n in core))


@STRICT_FAIL
def test_c7_materialized_relevance(sweep):
    # fails on delete p from p :- f, e. p :- f. with EDB {e, f}: cut {e, f}
    assert record(7, "materialized KB*7.3", failures(sweep, "postulates materialized KB*7.3") == 0), \
        sweep.witnesses.get("postulates materialized KB*7.3")


# 8, 9 lemmas ----------------------------------------------------------------------


def test_c8_filters_agree(sweep):
    ok = all(sweep.counts[n][0] > 0 and failures(sweep, n) == 0 for n in ("filters delete", "filters insert"))
    assert record(8, "deletion and insertion filters", ok)


def test_c9_cut_lemmas(sweep):
    ok = all(sweep.counts[n][0] > 0 and failures(sweep, n) == 0
             for n in ("cuts subset", "cuts contains", "insertion cuts subset", "insertion cuts contains",
                       "supports dual"))
    assert record(9, "cut lemmas", ok)


def test_c9_transfer(sweep):
    assert record(9, "hitting-set transfer", sweep.counts["transfer"][0] > 0 and failures(sweep, "transfer") == 0)


# 10 suite -------------------------------------------------------------------------


def test_c10_suite():
    report, secs = timed(lambda: run_suite(seed=0))
    needed = ["Cn inclusion", "Cn iteration", "Cn monotony", "levi", "harper", "disjunction"]
    needed += [f"revision +{i}" for i in range(1, 8)]
    ok = report.ok and all(report.counts.get(n, [0])[0] > 0 for n in needed) and secs < 60
    assert record(10, "exhaustive and randomized tiers", ok), report.lines()


# 11 parser ------------------------------------------------------------------------


def test_c11_round_trip():
    def same(kb, ddb=False):
        again = parse_program(serialize(kb), ddb=ddb)
        return (again.immutable == kb.immutable and set(again.updatable) == set(kb.updatable)
                and set(again.constraints) == set(kb.constraints) and serialize(again) == serialize(kb))

    files = sorted(EXAMPLES.glob("*.hkb"))
    ok = any(f.stem == "staff" for f in files) and all(same(parse_program(f.read_text())) for f in files)
    ok = ok and all(same(i.kb) for i in kb_corpus(0, 200))
    ok = ok and all(same(d, ddb=True) for d, _, _ in ddb_corpus(1, 200))
    assert record(11, "examples and corpora", ok)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
