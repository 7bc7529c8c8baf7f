"""View insertion and deletion over a deductive database.

Three routes: sld (explanations and hitting sets), tableau (hyper tableau
or VU rules with the strong minimality test) and materialized (tableau over
the IDB transformed by the least Herbrand model, no minimality test).
Deletions run the tableau calculus; insertions run the VU rules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .abduction import (
    NoExplanationError,
    _repairs,
    _State,
    build_sld_tree,
    deletion_explanations,
    insertion_explanations,
)
from .core import Atom, HkbError, KnowledgeBase, Literal, denial, fact, sorted_atoms
from .magic import Delta, NotTrueUpdateError, is_fresh, magic_vu
from .semantics import check_known, least_herbrand_model
from .tableau import (
    NODE_CAP,
    DClause,
    TLit,
    Tableau,
    close_branches,
    deletion_hitting_set,
    hyper_tableau,
    transform_idb_star,
    transform_materialized,
)

ALGOS = ("sld", "tableau", "materialized")
CUT_CAP = 4096
NON_GROUND = "non-ground realization"


class ImpossibleUpdateError(HkbError):
    pass


class TransactionError(HkbError):
    pass


def _names(atoms) -> list:
    return [str(a) for a in sorted_atoms(atoms)]


@dataclass(frozen=True)
class UpdateTransaction:
    insertions: frozenset = frozenset()
    deletions: frozenset = frozenset()
    provenance: str = ""
    flags: tuple = ()
    checks: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        if self.insertions & self.deletions:
            raise TransactionError("an atom is both inserted and deleted")

    def validate(self, ddb: KnowledgeBase):
        if self.insertions & ddb.edb:
            raise TransactionError(f"inserts stored fact {_names(self.insertions & ddb.edb)[0]}")
        if not self.deletions <= ddb.edb:
            raise TransactionError(f"deletes missing fact {_names(self.deletions - ddb.edb)[0]}")
        for a in self.insertions:
            if not a.is_ground:
                raise TransactionError(f"insertion {a} is not ground")

    def key(self):
        return (len(self.insertions) + len(self.deletions), _names(self.insertions), _names(self.deletions))

    def is_empty(self) -> bool:
        return not self.insertions and not self.deletions

    def as_dict(self) -> dict:
        d = {"insert": _names(self.insertions), "delete": _names(self.deletions), "provenance": self.provenance}
        if self.flags:
            d["flags"] = list(self.flags)
        return d

    def __str__(self):
        return f"+{{{', '.join(_names(self.insertions))}}} -{{{', '.join(_names(self.deletions))}}}"


def apply_transaction(ddb: KnowledgeBase, txn: UpdateTransaction) -> KnowledgeBase:
    """EDB′ = (EDB \\ T_del) ∪ T_ins; IDB and IC untouched."""
    txn.validate(ddb)
    return ddb.with_edb((ddb.edb - txn.deletions) | txn.insertions)


def _request(ddb: KnowledgeBase, request: Atom):
    if not request.is_ground:
        raise HkbError(f"view update needs a ground atom, got {request}")
    check_known(ddb, request)


def _views(ddb: KnowledgeBase) -> set:
    return ddb.view_predicates()


# tableaux ---------------------------------------------------------------------


def update_tableau(ddb: KnowledgeBase, request: Atom, node_cap: int = NODE_CAP) -> Tableau:
    """Hyper tableau for IDB* ∪ {¬A ←}."""
    return hyper_tableau(transform_idb_star(ddb), TLit(request, True), deletion_hitting_set(ddb.edb), node_cap)


def materialized_tableau(ddb: KnowledgeBase, request: Atom, model=None, node_cap: int = NODE_CAP) -> Tableau:
    """Hyper tableau for IDB+ ∪ {¬A ←}."""
    program = transform_materialized(ddb, model)["idb-plus"]
    return hyper_tableau(program, TLit(request, True), deletion_hitting_set(ddb.edb), node_cap)


def _is_base(ddb: KnowledgeBase, aux, a: Atom) -> bool:
    return a.predicate not in _views(ddb) and a.predicate not in aux


def vu_tableau(ddb: KnowledgeBase, request: Atom, mode: str = "insert", node_cap: int = NODE_CAP,
               extra=(), vu=None) -> tuple:
    """(tableau, VU rule set); an open branch holds a realization, HS(b) is its base ∇ atoms."""
    vu = vu or magic_vu(ddb, request, mode)
    hs = lambda lits: frozenset(l for l in lits if isinstance(l, Delta) and l.positive
                                and _is_base(ddb, vu.auxiliary, l.atom))
    return hyper_tableau(vu.clauses + tuple(extra), vu.seeds[0], hs, node_cap), vu


def split_deltas(hs) -> tuple:
    ins = frozenset(d.atom for d in hs if d.sign == "+")
    dels = frozenset(d.atom for d in hs if d.sign == "-")
    return ins, dels


# minimality and groundedness ------------------------------------------------------


def _model(ddb: KnowledgeBase, edb) -> frozenset:
    return least_herbrand_model(ddb.with_edb(edb)).atoms


def strong_minimality(ddb: KnowledgeBase, request: Atom, hs) -> bool:
    """Deletion: ∀s ∈ HS: IDB ∪ (EDB \\ HS) ∪ {s} ⊢ A."""
    rest = ddb.edb - frozenset(hs)
    return all(request in _model(ddb, rest | {s}) for s in hs)


def insertion_minimality(ddb: KnowledgeBase, request: Atom, ins, dels=frozenset()) -> bool:
    """Insertion: dropping any single change loses A."""
    ins, dels = frozenset(ins), frozenset(dels)
    for s in ins:
        if request in _model(ddb, (ddb.edb - dels) | (ins - {s})):
            return False
    for s in dels:
        if request in _model(ddb, (ddb.edb - (dels - {s})) | ins):
            return False
    return True


def groundedness(ddb: KnowledgeBase, request: Atom, hs, clauses=None) -> bool:
    """Deletion: ∀s ∈ HS, IDB* ∪ {¬A} with every atom of (EDB \\ HS) ∪ {s} kept has no open branch."""
    clauses = tuple(clauses if clauses is not None else transform_idb_star(ddb))
    rest = ddb.edb - frozenset(hs)
    for s in hs:
        keep = tuple(DClause((), (TLit(x, True),)) for x in sorted_atoms(rest | {s}))
        if hyper_tableau(clauses + keep, TLit(request, True)).open_branches():
            return False
    return True


def insertion_groundedness(ddb: KnowledgeBase, request: Atom, hs, vu) -> bool:
    """Insertion: ∀s ∈ HS, the VU tableau allowed only the changes HS \\ {s} has no open branch."""
    base = {d for c in vu.clauses for d in c.head if _is_base(ddb, vu.auxiliary, d.atom)}
    for s in hs:
        allowed = frozenset(hs) - {s}
        deny = tuple(DClause((), (d,)) for d in sorted(base - allowed, key=Delta.sort_key))
        t, _ = vu_tableau(ddb, request, "insert", extra=deny, vu=vu)
        if t.open_branches():
            return False
    return True


def minimality_filter(tableau: Tableau, ddb: KnowledgeBase, request: Atom, mode: str = "delete",
                      method: str = "minimality", vu=None) -> Tableau:
    """Close every open branch failing the strong minimality (or groundedness) test.

    For VU tableaux the open branches are the realizations, so failing ones
    are closed as well.
    """
    failing = []
    for b in tableau.open_branches():
        if mode == "delete":
            ok = (strong_minimality(ddb, request, b.hitting_set) if method == "minimality"
                  else groundedness(ddb, request, b.hitting_set))
        else:
            if method == "minimality":
                ok = insertion_minimality(ddb, request, *split_deltas(b.hitting_set))
            else:
                ok = insertion_groundedness(ddb, request, b.hitting_set, vu or magic_vu(ddb, request, mode))
        if not ok:
            failing.append(b.index)
    return close_branches(tableau, failing, method)


# algorithms -------------------------------------------------------------------


def _holds(mode: str, request: Atom, model) -> bool:
    return (request in model) == (mode == "insert")


def _candidates(ddb: KnowledgeBase, request: Atom, mode: str, algo: str) -> list:
    """(insertions, deletions, provenance, facts the repair must keep) before the integrity repair."""
    if algo == "sld":
        try:
            fam = insertion_explanations(ddb, request) if mode == "insert" else deletion_explanations(ddb, request)
        except NoExplanationError:
            return []
        return [(e.plus, e.minus, f"sld:{i + 1}", e.plus | e.support) for i, e in enumerate(fam.members)]
    if mode == "delete":
        if algo == "tableau":
            t = minimality_filter(update_tableau(ddb, request), ddb, request, "delete")
        else:
            t = materialized_tableau(ddb, request)
        return [(frozenset(), b.hitting_set, f"{algo}:b{b.index}", frozenset()) for b in t.open_branches()]
    t, vu = vu_tableau(ddb, request, "insert")
    if algo == "tableau":
        t = minimality_filter(t, ddb, request, "insert", vu=vu)
    out = []
    for b in t.open_branches():
        ins, dels = split_deltas(b.hitting_set)
        keep = (vu.support(b.literals, ddb.edb) - dels) | ins
        out.append((ins - ddb.edb, dels & ddb.edb, f"{algo}:b{b.index}", keep))
    return out


def view_update(
    ddb: KnowledgeBase,
    request: Atom,
    mode: str = "insert",
    algo: str = "materialized",
    all_solutions: bool = True,
    union: bool = False,
) -> tuple:
    """Canonically sorted transactions realizing the request with every constraint satisfied.

    union=True merges every solution into one transaction, EDB′ = (EDB ∪ ⋃ins) \\ ⋃del.
    A request that already holds yields the empty transaction.
    """
    if mode not in ("insert", "delete"):
        raise HkbError(f"mode must be insert or delete, got {mode!r}")
    if algo not in ALGOS:
        raise HkbError(f"unknown algorithm {algo!r}")
    _request(ddb, request)
    state = _State(ddb, (Literal(request),))
    model = state.model(ddb.edb)
    if _holds(mode, request, model) and not state.violations(model):
        return (UpdateTransaction(provenance=f"{algo}:already-satisfied"),)
    if _holds(mode, request, model):
        raise ImpossibleUpdateError("the database violates its constraints before the update")
    ok = lambda m: _holds(mode, request, m)
    found = {}
    for ins, dels, prov, keep in _candidates(ddb, request, mode, algo):
        if not ok(state.model((ddb.edb - dels) | ins)):
            continue
        for extra in _repairs(state, ddb.edb - dels, ins, keep, (), ok):
            key = (frozenset(ins), frozenset(dels | extra))
            if key not in found:
                found[key] = prov
    txns = []
    for (ins, dels), prov in found.items():
        flags = (NON_GROUND,) if any(is_fresh(a) for a in ins) else ()
        txns.append(UpdateTransaction(ins, dels, prov, flags))
    txns.sort(key=UpdateTransaction.key)
    if not txns:
        raise ImpossibleUpdateError(f"no base update {'inserts' if mode == 'insert' else 'deletes'} {request}")
    if union:
        ins = frozenset().union(*[t.insertions for t in txns])
        dels = frozenset().union(*[t.deletions for t in txns])
        flags = (NON_GROUND,) if any(t.flags for t in txns) else ()
        return (UpdateTransaction(ins, dels, f"{algo}:union", flags),)
    return tuple(txns) if all_solutions else (txns[0],)


def alpha_for(request: Atom, mode: str):
    return fact(request) if mode == "insert" else denial(Literal(request))


def check_names(algo: str) -> tuple:
    names = ("KB*1", "KB*2", "KB*3.1", "KB*3.2", "KB*4.1", "KB*4.2", "KB*5", "KB*6", "KB*7.3")
    return names + ("KB*7.1",) if algo == "tableau" else names


def operator_for(algo: str):
    """KB*6 operator: the same algorithm applied to a fact or single-atom denial."""

    def op(kb: KnowledgeBase, beta):
        if beta.kind == "fact":
            req, mode = beta.head, "insert"
        elif beta.kind == "constraint" and len(beta.body) == 1 and not beta.body[0].negated:
            req, mode = beta.body[0].atom, "delete"
        else:
            return []
        try:
            return [apply_transaction(kb, t) for t in view_update(kb, req, mode, algo)]
        except (ImpossibleUpdateError, NotTrueUpdateError, HkbError):
            return [kb]

    return op


def check_transaction(ddb: KnowledgeBase, request: Atom, mode: str, txn: UpdateTransaction, algo: str):
    from .lab.postulates import check_revision_postulates

    after = apply_transaction(ddb, txn)
    return check_revision_postulates(ddb, alpha_for(request, mode), after, operator_for(algo), check_names(algo))


# EDB cuts ---------------------------------------------------------------------


def edb_cuts(tableau: Tableau, cap: int = CUT_CAP) -> list:
    """Sets {A_1, …, A_n} with ¬A_i on the i-th open branch, one pick per branch."""
    picks = [sorted_atoms(b.hitting_set) for b in tableau.open_branches()]
    if not picks or any(not p for p in picks):
        return []
    out = set()
    for combo in itertools.islice(itertools.product(*picks), cap):
        out.add(frozenset(combo))
    return sorted(out, key=lambda s: (len(s), _names(s)))


def derivation_supports(ddb: KnowledgeBase, request: Atom) -> list:
    """Minimal EDB supports of the refutations of A in the current database."""
    model = least_herbrand_model(ddb).atoms
    tree = build_sld_tree(ddb, request, abduce=False)
    sets = {frozenset(b.facts) for b in tree.actual_success(model)}
    return sorted((s for s in sets if not any(t < s for t in sets)), key=lambda s: (len(s), _names(s)))


def brute_supports(ddb: KnowledgeBase, request: Atom, bound: int = 12) -> list:
    """The same by subset enumeration of the EDB."""
    edb = sorted_atoms(ddb.edb)
    if len(edb) > bound:
        raise HkbError(f"{len(edb)} facts exceed the enumeration bound {bound}")
    good = [frozenset(s) for r in range(len(edb) + 1) for s in itertools.combinations(edb, r)
            if request in _model(ddb, s)]
    return sorted((s for s in good if not any(t < s for t in good)), key=lambda s: (len(s), _names(s)))


def brute_insertions(ddb: KnowledgeBase, request: Atom, bound: int = 12) -> list:
    """Minimal sets of missing base atoms whose insertion derives A, constraints ignored."""
    from .abduction import ground_program

    views = _views(ddb)
    g = ground_program(ddb, [t.label for t in request.args])
    pool = sorted_atoms({l.atom for r in g.rules for l in r.body if l.atom.predicate not in views} - ddb.edb)
    if len(pool) > bound:
        raise HkbError(f"{len(pool)} base atoms exceed the enumeration bound {bound}")
    good = []
    for r in range(len(pool) + 1):
        for s in itertools.combinations(pool, r):
            s = frozenset(s)
            if any(t <= s for t in good):
                continue
            if request in _model(ddb, ddb.edb | s):
                good.append(s)
    return sorted(good, key=lambda s: (len(s), _names(s)))


def cut_lemma(s, s_prime) -> dict:
    s = {frozenset(x) for x in s}
    sp = {frozenset(x) for x in s_prime}
    union = frozenset().union(*s) if s else frozenset()
    return {
        "subset": s <= sp,
        "contains": all(any(d <= dp for d in s) for dp in sp),
        "covered": all(dp <= union for dp in sp),
    }


def hitting_sets_brute(family) -> list:
    family = [frozenset(x) for x in family]
    pool = sorted_atoms(frozenset().union(*family)) if family else []
    hits = [frozenset(h) for r in range(len(pool) + 1) for h in itertools.combinations(pool, r)
            if all(h_ & set(h) for h_ in family)]
    return sorted((h for h in hits if not any(o < h for o in hits)), key=lambda s: (len(s), _names(s)))


def hitting_set_transfer(s, s_prime) -> bool:
    """Minimal hitting sets of S and of S′ coincide."""
    return set(hitting_sets_brute(s)) == set(hitting_sets_brute(s_prime))
