"""Subset-enumeration oracles for remainders and kernels.

The consistency test here runs its own propositional fixpoint over a
grounding computed once per instance; it shares no code with the
semantics module.
"""

from __future__ import annotations

import itertools

from ..core import HkbError, HornClause, KnowledgeBase
from ..grounding import ground_clause, herbrand_universe, stratify

ORACLE_BOUND = 14


class OracleBoundError(HkbError):
    pass


class _Ground:
    def __init__(self, kb: KnowledgeBase, alpha: HornClause):
        extra = [t.label for a in alpha.atoms() for t in a.args if not t.is_var]
        universe = herbrand_universe(kb, extra)
        probe = kb
        if alpha.kind == "rule":
            probe = KnowledgeBase(kb.immutable + (alpha,), kb.updatable, kb.constraints, kb.declared_abducibles)
        level = stratify(probe).level
        self.alpha = alpha
        self.instances = {c: ground_clause(c, universe) for c in tuple(kb.immutable) + (alpha,)}
        self.constraints = [g for c in kb.constraints for g in ground_clause(c, universe)]
        if alpha.kind == "constraint":
            self.constraints += ground_clause(alpha, universe)
        self.level = lambda a: level.get(a.predicate, 0)

    def model(self, clauses) -> set:
        facts = {c.head for c in clauses if c.kind == "fact"}
        rules = [g for c in clauses if c.kind == "rule" for g in self.instances[c]]
        if self.alpha.kind == "fact":
            facts.add(self.alpha.head)
        elif self.alpha.kind == "rule":
            rules += self.instances[self.alpha]
        model = set(facts)
        for lv in sorted({self.level(r.head) for r in rules}):
            tier = [r for r in rules if self.level(r.head) == lv]
            changed = True
            while changed:
                changed = False
                for r in tier:
                    if r.head not in model and all((l.atom in model) != l.negated for l in r.body):
                        model.add(r.head)
                        changed = True
        return model

    def consistent(self, clauses) -> bool:
        model = self.model(clauses)
        return not any(all((l.atom in model) != l.negated for l in c.body) for c in self.constraints)


def _check(kb: KnowledgeBase):
    n = len(kb.immutable) + len(kb.updatable)
    if n > ORACLE_BOUND:
        raise OracleBoundError(f"|KB_I| + |KB_U| = {n} (> {ORACLE_BOUND})")


def _sort(family) -> list:
    return sorted(family, key=lambda m: (len(m), sorted(str(c) for c in m)))


def oracle_remainders(kb: KnowledgeBase, alpha: HornClause) -> list:
    """Maximal KB_I ∪ KB_IC ∪ U' consistent with α, by raw enumeration of U' ⊆ KB_U."""
    _check(kb)
    g = _Ground(kb, alpha)
    base = frozenset(kb.immutable) | frozenset(kb.constraints)
    if not g.consistent(kb.immutable):
        return [frozenset(kb.all_clauses())]
    facts = list(kb.updatable)
    ok = [frozenset(s) for r in range(len(facts) + 1) for s in itertools.combinations(facts, r)
          if g.consistent(tuple(kb.immutable) + s)]
    maximal = [s for s in ok if not any(s < t for t in ok)]
    return _sort(base | s for s in maximal)


def oracle_kernels(kb: KnowledgeBase, alpha: HornClause) -> list:
    """Minimal X ⊆ KB_I ∪ KB_U with X ∪ {α} inconsistent with KB_IC, by raw enumeration."""
    _check(kb)
    g = _Ground(kb, alpha)
    pool = list(kb.immutable) + list(kb.updatable)
    bad = [frozenset(s) for r in range(len(pool) + 1) for s in itertools.combinations(pool, r)
           if not g.consistent(s)]
    return _sort(s for s in bad if not any(t < s for t in bad))
