"""Remainders, kernels, hitting sets, partial-meet and kernel revision."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import HkbError, HornClause, KnowledgeBase, fact
from .semantics import consistent_with


class UnhittableError(HkbError):
    """A non-empty family member has no updatable element."""


def clause_key(c: HornClause):
    return (c.kind != "fact", str(c))


def canon(clauses: Iterable[HornClause]) -> tuple:
    return tuple(sorted(set(clauses), key=clause_key))


def family_key(members):
    return sorted(members, key=lambda m: (len(m), [str(c) for c in canon(m)]))


@dataclass(frozen=True)
class RemainderFamily:
    alpha: HornClause
    members: tuple = ()

    def updatable_parts(self, kb: KnowledgeBase) -> list:
        u = set(kb.updatable)
        return [frozenset(m) & u for m in self.members]


@dataclass(frozen=True)
class KernelFamily:
    alpha: HornClause
    members: tuple = ()

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class HittingSet:
    elements: frozenset = frozenset()

    def names(self) -> list:
        return sorted(str(c) for c in self.elements)


MODES = ("minimal-incision", "maximal-incision", "full-meet", "maxichoice", "ranked")


@dataclass(frozen=True)
class ChangeStrategy:
    mode: str = "minimal-incision"
    priority: Optional[dict] = field(default=None, hash=False, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown strategy {self.mode!r}")
        if self.mode == "ranked" and self.priority is None:
            raise ValueError("ranked strategy needs a priority mapping")

    def check_total(self, kb: KnowledgeBase):
        if self.mode == "ranked":
            missing = [c for c in kb.updatable if c not in self.priority]
            if missing:
                raise ValueError(f"priority missing for {missing[0]}")


STRATEGY_ALIASES = {"minimal": "minimal-incision", "maximal": "maximal-incision"}


def strategy(name: str, priority=None) -> ChangeStrategy:
    return ChangeStrategy(STRATEGY_ALIASES.get(name, name), priority)


# consistency helpers -------------------------------------------------------


def subkb(kb: KnowledgeBase, clauses: Iterable[HornClause]) -> KnowledgeBase:
    """The knowledge base made of `clauses` with kb's constraints."""
    clauses = set(clauses)
    imm = tuple(c for c in kb.immutable if c in clauses)
    extra_rules = tuple(c for c in canon(clauses) if c.kind == "rule" and c not in kb.immutable)
    upd = tuple(c for c in canon(clauses) if c.kind == "fact" and c not in kb.immutable)
    return KnowledgeBase(imm + extra_rules, upd, kb.constraints, kb.declared_abducibles)


def consistent(kb: KnowledgeBase, clauses: Iterable[HornClause], alpha: HornClause) -> bool:
    """clauses ∪ {α} is consistent with KB_IC."""
    return consistent_with(subkb(kb, clauses), alpha)


def alpha_admissible(kb: KnowledgeBase, alpha: HornClause) -> bool:
    """α is consistent with KB_I ∪ KB_IC."""
    return consistent(kb, kb.immutable, alpha)


# families ------------------------------------------------------------------


def remainders(kb: KnowledgeBase, alpha: HornClause) -> RemainderFamily:
    """Maximal KB_I ∪ KB_IC ∪ U' (U' ⊆ KB_U) consistent with α; {kb} when α is inconsistent with KB_I ∪ KB_IC."""
    everything = frozenset(kb.all_clauses())
    if not alpha_admissible(kb, alpha):
        return RemainderFamily(alpha, (everything,))
    base = frozenset(kb.immutable) | frozenset(kb.constraints)
    facts = canon(kb.updatable)
    found = []
    for r in range(len(facts), -1, -1):
        for combo in itertools.combinations(facts, r):
            s = frozenset(combo)
            if any(s < f for f in found):
                continue
            if consistent(kb, base | s, alpha):
                found.append(s)
    members = [base | s for s in found]
    return RemainderFamily(alpha, tuple(family_key(members)))


def kernels(kb: KnowledgeBase, alpha: HornClause, route: str = "auto") -> KernelFamily:
    """Minimal X ⊆ KB_I ∪ KB_U with X ∪ {α} inconsistent with KB_IC.

    route "sld" reads kernels off SLD derivations (definite DDBs), "enumerate"
    uses subset enumeration; "auto" picks sld for definite DDBs.
    """
    if route == "auto":
        route = "sld" if kb.ddb and is_definite(kb) else "enumerate"
    if route == "sld":
        from .abduction import sld_kernels

        members = sld_kernels(kb, alpha)
    else:
        members = enumerate_kernels(kb, alpha)
    return KernelFamily(alpha, tuple(family_key(members)))


def is_definite(kb: KnowledgeBase) -> bool:
    return not any(l.negated for c in kb.all_clauses() for l in c.body)


def enumerate_kernels(kb: KnowledgeBase, alpha: HornClause) -> list:
    pool = canon(tuple(kb.immutable) + tuple(kb.updatable))
    found = []
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            s = frozenset(combo)
            if any(f <= s for f in found):
                continue
            if not consistent(kb, s, alpha):
                found.append(s)
    return found


def minimal_hitting_sets(family, updatable, protected=()) -> list:
    """All inclusion-minimal H ⊆ updatable hitting every member (Berge's incremental method)."""
    updatable = set(updatable)
    protected = set(protected)
    parts = []
    for m in family:
        m = frozenset(m)
        if not m:
            continue
        u = (m & updatable) - protected
        if not u:
            raise UnhittableError(f"member {sorted(map(str, m))} has no updatable element")
        parts.append(u)
    hs = {frozenset()}
    for part in sorted(set(parts), key=lambda s: (len(s), sorted(map(str, s)))):
        nxt = set()
        for h in hs:
            if h & part:
                nxt.add(h)
            else:
                for x in part:
                    nxt.add(h | {x})
        hs = {h for h in nxt if not any(o < h for o in nxt)}
    return [HittingSet(h) for h in sort_sets(hs)]


def sort_sets(sets) -> list:
    return sorted(sets, key=lambda s: (len(s), sorted(str(c) for c in s)))


def _removal_cost(removed, priority):
    return sorted((priority[c] for c in removed), reverse=True)


def incision(kb: KnowledgeBase, family: KernelFamily, strat: ChangeStrategy) -> frozenset:
    """σ(KB⊥⊥α) for the given strategy."""
    upd = set(kb.updatable)
    if strat.mode == "maximal-incision":
        return frozenset(c for m in family.members for c in m if c in upd)
    hs = minimal_hitting_sets(family.members, upd, kb.immutable)
    if strat.mode == "full-meet":
        return frozenset(c for h in hs for c in h.elements)
    if strat.mode == "ranked":
        strat.check_total(kb)
        best = min(hs, key=lambda h: (_removal_cost(h.elements, strat.priority), sorted(map(str, h.elements))))
        return best.elements
    return hs[0].elements


def selection(kb: KnowledgeBase, family: RemainderFamily, strat: ChangeStrategy) -> list:
    """γ(KB↓⊤α) for the given strategy."""
    members = list(family.members)
    if strat.mode in ("full-meet", "maximal-incision"):
        return members
    upd = set(kb.updatable)
    if strat.mode == "ranked":
        strat.check_total(kb)
        return [min(members, key=lambda m: (_removal_cost(upd - m, strat.priority), sorted(map(str, upd - m))))]
    # maxichoice / minimal-incision: a single remainder, canonical order by removed facts
    return [min(members, key=lambda m: (len(upd - m), sorted(map(str, upd - m))))]


def add_alpha(kb: KnowledgeBase, clauses: Iterable[HornClause], alpha: HornClause) -> KnowledgeBase:
    clauses = set(clauses)
    imm = tuple(c for c in kb.immutable if c in clauses)
    upd = [c for c in kb.updatable if c in clauses]
    cons = list(kb.constraints)
    if alpha.kind == "fact":
        if alpha not in imm and alpha not in upd:
            upd.append(alpha)
    elif alpha.kind == "constraint":
        if alpha not in cons:
            cons.append(alpha)
    elif alpha not in imm:
        imm = imm + (alpha,)
    return KnowledgeBase(imm, tuple(canon(upd)), tuple(cons), kb.declared_abducibles)


def partial_meet_revision(kb: KnowledgeBase, alpha: HornClause, strat: ChangeStrategy) -> KnowledgeBase:
    if not alpha_admissible(kb, alpha):
        return kb
    fam = remainders(kb, alpha)
    chosen = selection(kb, fam, strat)
    meet = frozenset.intersection(*[frozenset(m) for m in chosen])
    return add_alpha(kb, meet, alpha)


def kernel_revision(kb: KnowledgeBase, alpha: HornClause, strat: ChangeStrategy) -> KnowledgeBase:
    if not alpha_admissible(kb, alpha):
        return kb
    fam = kernels(kb, alpha)
    cut = incision(kb, fam, strat)
    return add_alpha(kb, set(kb.all_clauses()) - cut, alpha)


# outcome classes ------------------------------------------------------------


def outcome_key(kb: KnowledgeBase):
    return (tuple(str(c) for c in kb.immutable), tuple(sorted(str(c) for c in kb.updatable)),
            tuple(sorted(str(c) for c in kb.constraints)))


def kernel_outcomes(kb: KnowledgeBase, alpha: HornClause, incisions: str = "all") -> dict:
    """Outcomes (kb minus σ) ∪ {α} over incision functions.

    incisions="all": every hitting set in the sense of the definition (any
    H ⊆ ⋃ kernels of updatable elements hitting every member);
    "minimal": inclusion-minimal ones; "unions": unions of non-empty sets of
    minimal hitting sets; "strategies": the named strategies only.
    """
    if not alpha_admissible(kb, alpha):
        return {outcome_key(kb): kb}
    fam = kernels(kb, alpha)
    upd = set(kb.updatable)
    pool = canon(c for m in fam.members for c in m if c in upd)
    cuts = []
    if incisions == "all":
        for r in range(len(pool) + 1):
            for combo in itertools.combinations(pool, r):
                h = frozenset(combo)
                if all(h & m for m in fam.members if set(m) & upd):
                    cuts.append(h)
    else:
        mhs = [h.elements for h in minimal_hitting_sets(fam.members, upd, kb.immutable)]
        if incisions == "minimal":
            cuts = mhs
        elif incisions == "unions":
            for r in range(1, len(mhs) + 1):
                for combo in itertools.combinations(mhs, r):
                    cuts.append(frozenset().union(*combo))
        else:
            cuts = mhs + [frozenset().union(*mhs), frozenset(pool)]
    out = {}
    for h in cuts:
        res = add_alpha(kb, set(kb.all_clauses()) - h, alpha)
        out.setdefault(outcome_key(res), res)
    return out


def partial_meet_outcomes(kb: KnowledgeBase, alpha: HornClause, selections: str = "all") -> dict:
    """Outcomes ⋂γ ∪ {α} over selection functions (all non-empty γ, or single remainders)."""
    if not alpha_admissible(kb, alpha):
        return {outcome_key(kb): kb}
    fam = remainders(kb, alpha)
    members = [frozenset(m) for m in fam.members]
    out = {}
    sizes = range(1, len(members) + 1) if selections == "all" else range(1, 2)
    for r in sizes:
        for combo in itertools.combinations(members, r):
            res = add_alpha(kb, frozenset.intersection(*combo), alpha)
            out.setdefault(outcome_key(res), res)
    if selections == "strategies":
        res = add_alpha(kb, frozenset.intersection(*members), alpha)
        out.setdefault(outcome_key(res), res)
    return out
