"""View-update sweep over the seeded DDB corpus.

Check names: "postulates <algo> <name>", "impossible confirmed" (with a
" tableau" suffix for that algorithm, whose filter precedes the repair),
"filters <mode>" (strong minimality against groundedness),
"supports dual", "cuts <key>", "transfer", "filtered hitting sets",
"materialized cuts <key>" and "insertion cuts <key>".
"""

from __future__ import annotations

import itertools
import time

from ..core import atom
from ..parser import serialize
from ..semantics import least_herbrand_model, satisfies_constraints
from ..viewupdate import (
    ALGOS,
    ImpossibleUpdateError,
    brute_insertions,
    brute_supports,
    check_transaction,
    cut_lemma,
    derivation_supports,
    edb_cuts,
    groundedness,
    hitting_set_transfer,
    hitting_sets_brute,
    insertion_groundedness,
    insertion_minimality,
    materialized_tableau,
    minimality_filter,
    split_deltas,
    strong_minimality,
    update_tableau,
    view_update,
    vu_tableau,
)
from .corpus import BASE_ATOMS, ddb_corpus
from .suite import SuiteReport

TRANSFER_BOUND = 8


def _tag(ddb, goal, mode) -> str:
    return f"{mode} {goal} in {' '.join(serialize(ddb).split())}"


def _names(sets) -> list:
    return [sorted(map(str, s)) for s in sets]


def brute_possible(ddb, goal, mode) -> bool:
    """Some EDB over the base atoms satisfies IC and realizes the request."""
    base = [atom(x) for x in BASE_ATOMS]
    for r in range(len(base) + 1):
        for s in itertools.combinations(base, r):
            k = ddb.with_edb(s)
            m = least_herbrand_model(k).atoms
            if (goal in m) == (mode == "insert") and satisfies_constraints(k, m):
                return True
    return False


def check_postulates(ddb, goal, mode, report: SuiteReport, algos=ALGOS):
    for algo in algos:
        tag = f"{algo}: {_tag(ddb, goal, mode)}"
        try:
            txns = view_update(ddb, goal, mode, algo)
        except ImpossibleUpdateError:
            name = "impossible confirmed" + (" tableau" if algo == "tableau" else "")
            report.record(name, not brute_possible(ddb, goal, mode), tag)
            continue
        for t in txns:
            for v in check_transaction(ddb, goal, mode, t, algo).verdicts:
                report.record(f"postulates {algo} {v.name}", v.passed, f"{tag} -> {t}: {v.witness}")


def check_deletion_lemmas(ddb, goal, report: SuiteReport):
    tag = _tag(ddb, goal, "delete")
    t = update_tableau(ddb, goal)
    for b in t.open_branches():
        same = strong_minimality(ddb, goal, b.hitting_set) == groundedness(ddb, goal, b.hitting_set)
        report.record("filters delete", same, f"{tag} branch {b.index}")
    s = derivation_supports(ddb, goal)
    report.record("supports dual", s == brute_supports(ddb, goal), tag)
    cuts = edb_cuts(t)
    lemma = cut_lemma(s, cuts)
    for k in ("subset", "contains"):
        report.record(f"cuts {k}", lemma[k], f"{tag}: S={_names(s)} cuts={_names(cuts)}")
    if len(frozenset().union(*s)) <= TRANSFER_BOUND:
        report.record("transfer", hitting_set_transfer(s, cuts), f"{tag}: S={_names(s)}")
    filtered = minimality_filter(t, ddb, goal, "delete")
    same = set(filtered.hitting_sets()) == set(hitting_sets_brute(s))
    report.record("filtered hitting sets", same, f"{tag}: HS={_names(filtered.hitting_sets())}")
    m = materialized_tableau(ddb, goal)
    mcuts = edb_cuts(m)
    for k, ok in cut_lemma(s, mcuts).items():
        report.record(f"materialized cuts {k}", ok, f"{tag}: S={_names(s)} cuts={_names(mcuts)}")


def check_insertion_lemmas(ddb, goal, report: SuiteReport):
    tag = _tag(ddb, goal, "insert")
    t, vu = vu_tableau(ddb, goal)
    for b in t.open_branches():
        same = (insertion_minimality(ddb, goal, *split_deltas(b.hitting_set))
                == insertion_groundedness(ddb, goal, b.hitting_set, vu))
        report.record("filters insert", same, f"{tag} branch {b.index}")
    s = brute_insertions(ddb, goal)
    seeds = [split_deltas(b.hitting_set)[0] for b in t.open_branches()]
    lemma = cut_lemma(s, seeds)
    for k in ("subset", "contains"):
        report.record(f"insertion cuts {k}", lemma[k], f"{tag}: S={_names(s)} branches={_names(seeds)}")


def run_sweep(seed: int = 1, count: int = 200, postulates: bool = True, lemmas: bool = True) -> SuiteReport:
    t0 = time.perf_counter()
    report = SuiteReport(seed, unit="databases")
    for ddb, goal, mode in ddb_corpus(seed, count):
        report.frameworks += 1
        if postulates:
            check_postulates(ddb, goal, mode, report)
        if lemmas:
            if mode == "delete":
                check_deletion_lemmas(ddb, goal, report)
            else:
                check_insertion_lemmas(ddb, goal, report)
    report.seconds = time.perf_counter() - t0
    return report
