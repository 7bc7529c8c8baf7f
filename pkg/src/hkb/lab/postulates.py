"""Decision procedures for the Horn revision postulates KB*1 to KB*7.3.

Realization outputs (Algorithm 1, view updates) do not add α as a clause;
they add facts that make α hold. "KB ∪ α" is then read as KB extended by
α and by the inserted facts, and "α ⊆ KB*α" as "α holds in KB*α".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..abduction import NoExplanationError, deletion_explanations, insertion_explanations
from ..change import alpha_admissible
from ..core import HornClause, KnowledgeBase, Literal, fact, sorted_atoms
from ..grounding import NotStratifiableError, stratify
from ..semantics import (
    EquivalenceBoundError,
    consistent_with,
    holds,
    kb_equivalent,
    least_herbrand_model,
    satisfies_constraints,
    semi_naive_model,
)

NAMES = ("KB*1", "KB*2", "KB*3.1", "KB*3.2", "KB*4.1", "KB*4.2", "KB*5", "KB*6", "KB*7.1", "KB*7.2", "KB*7.3")
SEARCH_BOUND = 12


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    witness: Optional[str] = None
    note: str = ""

    def __str__(self):
        tag = "pass" if self.passed else f"fail({self.witness})"
        return f"{self.name}: {tag}" + (f"  [{self.note}]" if self.note else "")


@dataclass(frozen=True)
class PostulateReport:
    verdicts: tuple = ()

    def __getitem__(self, name) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def passed(self, names=None) -> bool:
        names = NAMES if names is None else names
        return all(v.passed for v in self.verdicts if v.name in names)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]

    def as_dict(self) -> dict:
        return {v.name: ({"pass": True} if v.passed else {"pass": False, "witness": v.witness}) for v in self.verdicts}

    def __str__(self):
        return "\n".join(str(v) for v in self.verdicts)


def default_operator(kb: KnowledgeBase, alpha: HornClause) -> list:
    from ..revision import all_minimal_revisions

    return [o.kb_after for o in all_minimal_revisions(kb, alpha, trace=False)]


class _Ctx:
    def __init__(self, before: KnowledgeBase, alpha: HornClause, after: KnowledgeBase):
        self.before = before
        self.alpha = alpha
        self.after = after
        self.admissible = alpha_admissible(before, alpha)
        self.inserted = frozenset(after.edb - before.edb)
        self.removed = [c for c in before.all_clauses() if c not in set(after.all_clauses())]
        self._cons = {}

    def extended(self) -> KnowledgeBase:
        """KB ∪ α with the realization's inserted facts."""
        return self.before.with_edb(self.before.edb | self.inserted)

    def consistent(self, facts) -> bool:
        key = frozenset(facts)
        got = self._cons.get(key)
        if got is None:
            got = consistent_with(_with_facts(self.before, key), self.alpha)
            self._cons[key] = got
        return got


def _with_facts(kb: KnowledgeBase, facts) -> KnowledgeBase:
    upd = tuple(fact(a) for a in sorted_atoms(facts) if fact(a) not in set(kb.immutable))
    return KnowledgeBase(kb.immutable, upd, kb.constraints, kb.declared_abducibles)


def _closure(ctx: _Ctx) -> Verdict:
    try:
        stratify(ctx.after)
    except NotStratifiableError as exc:
        return Verdict("KB*1", False, str(exc))
    return Verdict("KB*1", True)


def _success(name, ctx: _Ctx) -> Verdict:
    if not ctx.admissible:
        return Verdict(name, True, note="vacuous: alpha inconsistent with KB_I and KB_IC")
    if holds(ctx.after, ctx.alpha):
        return Verdict(name, True)
    return Verdict(name, False, f"{ctx.alpha} does not hold after revision")


def _explained_atoms(ctx: _Ctx) -> frozenset:
    try:
        if ctx.alpha.kind == "fact":
            fam = insertion_explanations(ctx.before, ctx.alpha.head)
        elif ctx.alpha.kind == "constraint":
            fam = deletion_explanations(ctx.before, ctx.alpha.body)
        else:
            return frozenset()
    except NoExplanationError:
        return frozenset()
    return frozenset().union(*[m.plus for m in fam.members]) if fam.members else frozenset()


def _inclusion(ctx: _Ctx) -> Verdict:
    before, after, alpha = ctx.before, ctx.after, ctx.alpha
    allowed_rules = set(before.immutable) | ({alpha} if alpha.kind == "rule" else set())
    for c in after.immutable:
        if c not in allowed_rules:
            return Verdict("KB*3.1", False, f"rule {c} not in KB or alpha")
    allowed_ics = set(before.constraints) | ({alpha} if alpha.kind == "constraint" else set())
    for c in after.constraints:
        if c not in allowed_ics:
            return Verdict("KB*3.1", False, f"constraint {c} not in KB or alpha")
    if not ctx.inserted:
        return Verdict("KB*3.1", True)
    extra = [alpha.head] if alpha.kind == "fact" else []
    cn = least_herbrand_model(before, extra).atoms
    explained = None
    for a in sorted_atoms(ctx.inserted):
        if a in cn:
            continue
        if explained is None:
            explained = _explained_atoms(ctx)
        if a not in explained:
            return Verdict("KB*3.1", False, f"inserted {a} is neither a consequence of KB and alpha nor in an explanation")
    return Verdict("KB*3.1", True)


def _immutable_inclusion(ctx: _Ctx) -> Verdict:
    after_set = set(ctx.after.immutable)
    for c in ctx.before.immutable:
        if c not in after_set and not holds(ctx.after, c):
            return Verdict("KB*3.2", False, f"immutable clause {c} lost")
    return Verdict("KB*3.2", True)


def _vacuity1(ctx: _Ctx) -> Verdict:
    if ctx.admissible:
        return Verdict("KB*4.1", True, note="vacuous: alpha consistent with KB_I and KB_IC")
    if ctx.after.same_content(ctx.before):
        return Verdict("KB*4.1", True)
    return Verdict("KB*4.1", False, "kb changed although alpha is inconsistent with KB_I and KB_IC")


def _vacuity2(ctx: _Ctx) -> Verdict:
    if not consistent_with(ctx.extended(), ctx.alpha):
        return Verdict("KB*4.2", True, note="vacuous: KB and alpha inconsistent")
    if ctx.removed:
        return Verdict("KB*4.2", False, f"{ctx.removed[0]} removed although KB and alpha are consistent")
    if not holds(ctx.after, ctx.alpha):
        return Verdict("KB*4.2", False, f"{ctx.alpha} does not hold")
    return Verdict("KB*4.2", True)


def _consistency(ctx: _Ctx) -> Verdict:
    if not ctx.admissible:
        return Verdict("KB*5", True, note="vacuous: alpha inconsistent with KB_I and KB_IC")
    model = least_herbrand_model(ctx.after).atoms
    if satisfies_constraints(ctx.after, model, ctx.before.constraints):
        return Verdict("KB*5", True)
    return Verdict("KB*5", False, "a constraint of KB_IC is violated after revision")


def _candidates(kb: KnowledgeBase, alpha: HornClause) -> list:
    """Clauses that can be KB-equivalent to α, cheaply pre-filtered."""
    rules_only = KnowledgeBase(kb.immutable, (), kb.constraints, kb.declared_abducibles)
    out = []
    if alpha.kind == "fact":
        for a in sorted_atoms(semi_naive_model(rules_only, [alpha.head])):
            if a == alpha.head:
                continue
            if alpha.head in semi_naive_model(rules_only, [a]):
                out.append(fact(a))
    elif alpha.kind == "constraint":
        body_atoms = [l.atom for l in alpha.body if not l.negated and not l.atom.is_builtin]
        if len(alpha.body) > 1:
            out.append(HornClause(None, tuple(reversed(alpha.body))))
        if body_atoms:
            for a in sorted_atoms(semi_naive_model(rules_only, body_atoms)):
                beta = HornClause(None, (Literal(a),))
                if beta == alpha:
                    continue
                if not holds(rules_only, alpha, semi_naive_model(rules_only, [a])):
                    out.append(beta)
    return out


def _clause_shape(c: HornClause):
    """Body order carries no meaning; `:- q, r.` and `:- r, q.` are one clause."""
    return (c.head, frozenset(c.body))


def _equivalent_kbs(k1: KnowledgeBase, k2: KnowledgeBase, a1=None, a2=None) -> bool:
    """Same rules, constraints and model, ignoring the revising clauses a1 in k1 and a2 in k2."""
    def shapes(cs, skip):
        return {_clause_shape(c) for c in cs} - ({_clause_shape(skip)} if skip is not None else set())

    return (
        shapes(k1.immutable, a1) == shapes(k2.immutable, a2)
        and shapes(k1.constraints, a1) == shapes(k2.constraints, a2)
        and least_herbrand_model(k1).atoms == least_herbrand_model(k2).atoms
    )


def _preservation(ctx: _Ctx, operator: Callable) -> Verdict:
    if ctx.alpha.kind == "rule":
        return Verdict("KB*6", True, note="vacuous: no candidate clauses for a rule")
    for beta in _candidates(ctx.before, ctx.alpha):
        try:
            eq = kb_equivalent(ctx.before, ctx.alpha, beta)
        except EquivalenceBoundError as exc:
            return Verdict("KB*6", False, f"search-bound-exceeded: {exc}")
        if not eq:
            continue
        outcomes = operator(ctx.before, beta)
        if not any(_equivalent_kbs(ctx.after, o, ctx.alpha, beta) for o in outcomes):
            return Verdict("KB*6", False, f"revision by the KB-equivalent {beta} gives no equivalent result")
    return Verdict("KB*6", True)


def _relevance(name: str, ctx: _Ctx, include_after: bool) -> Verdict:
    removed = ctx.removed
    if not removed:
        return Verdict(name, True, note="vacuous: nothing removed")
    for beta in removed:
        if beta.kind != "fact":
            return Verdict(name, False, f"non-fact clause {beta} removed")
    pool = sorted_atoms(ctx.before.edb | ctx.inserted)
    if len(pool) > SEARCH_BOUND:
        return Verdict(name, False, f"search-bound-exceeded: {len(pool)} facts > {SEARCH_BOUND}")
    base = frozenset(ctx.after.edb) if include_after else frozenset()
    for beta in removed:
        b = beta.head
        free = [a for a in pool if a not in base and a != b]
        found = None
        for r in range(len(free), -1, -1):
            for combo in itertools.combinations(free, r):
                kb1 = base | frozenset(combo)
                if ctx.consistent(kb1) and not ctx.consistent(kb1 | {b}):
                    found = kb1
                    break
            if found is not None:
                break
        if found is None:
            return Verdict(name, False, f"beta = {beta} has no relevance witness")
    return Verdict(name, True)


def check_revision_postulates(
    kb_before: KnowledgeBase,
    alpha: HornClause,
    kb_after: KnowledgeBase,
    operator: Optional[Callable] = None,
    names=NAMES,
) -> PostulateReport:
    """Decide each postulate for one revision instance.

    operator(kb, β) -> candidate results for KB*6; defaults to all minimal
    generalized revisions. Relevance searches are exhaustive up to
    SEARCH_BOUND facts and fail with search-bound-exceeded beyond it.
    """
    ctx = _Ctx(kb_before, alpha, kb_after)
    op = operator or default_operator
    table = {
        "KB*1": lambda: _closure(ctx),
        "KB*2": lambda: _success("KB*2", ctx),
        "KB*3.1": lambda: _inclusion(ctx),
        "KB*3.2": lambda: _immutable_inclusion(ctx),
        "KB*4.1": lambda: _vacuity1(ctx),
        "KB*4.2": lambda: _vacuity2(ctx),
        "KB*5": lambda: _consistency(ctx),
        "KB*6": lambda: _preservation(ctx, op),
        "KB*7.1": lambda: _success("KB*7.1", ctx),
        "KB*7.2": lambda: _relevance("KB*7.2", ctx, True),
        "KB*7.3": lambda: _relevance("KB*7.3", ctx, False),
    }
    return PostulateReport(tuple(table[n]() for n in NAMES if n in names))
