"""Least Herbrand (perfect) model, entailment, constraint checks, KB-equivalence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (
    Atom,
    HkbError,
    HornClause,
    KnowledgeBase,
    Literal,
    UnknownPredicateError,
    const,
    sorted_atoms,
)
from .grounding import eval_builtin, ground, herbrand_universe, stratify


@dataclass(frozen=True)
class HerbrandModel:
    atoms: frozenset = frozenset()

    def __contains__(self, a: Atom) -> bool:
        return a in self.atoms

    def __iter__(self):
        return iter(sorted_atoms(self.atoms))

    def __len__(self):
        return len(self.atoms)

    def sorted(self) -> list:
        return [str(a) for a in sorted_atoms(self.atoms)]


@dataclass(frozen=True)
class ConstraintViolationSet:
    violated: tuple = ()
    witnesses: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.violated)

    def __len__(self):
        return len(self.violated)

    def witness_count(self) -> int:
        return sum(len(w) for w in self.witnesses.values())


# joins ---------------------------------------------------------------------


def _match(pattern: Atom, ground_atom: Atom, theta: dict) -> Optional[dict]:
    out = None
    for t, g in zip(pattern.args, ground_atom.args):
        if t.is_var:
            bound = (out or theta).get(t)
            if bound is None:
                if out is None:
                    out = dict(theta)
                out[t] = g
            elif bound != g:
                return None
        elif t != g:
            return None
    return out if out is not None else theta


class _Index:
    def __init__(self, atoms=()):
        self.by_pred = {}
        self.all = set()
        for a in atoms:
            self.add(a)

    def add(self, a: Atom) -> bool:
        if a in self.all:
            return False
        self.all.add(a)
        self.by_pred.setdefault(a.predicate, []).append(a)
        return True

    def get(self, pred):
        return self.by_pred.get(pred, ())


def _solutions(body: tuple, facts: _Index, universe: list, delta: Optional[tuple] = None):
    """All substitutions grounding `body` true w.r.t. `facts`.

    Positive literals are joined against facts; variables left unbound are
    enumerated over the universe; negative literals and built-ins are then
    tested. With delta=(position, index), the positive literal at that position
    ranges over the delta index only.
    """
    positives = [(i, l) for i, l in enumerate(body) if not l.negated and not l.atom.is_builtin]
    thetas = [{}]
    for i, lit in positives:
        source = delta[1] if delta is not None and delta[0] == i else facts
        nxt = []
        for theta in thetas:
            for g in source.get(lit.atom.predicate):
                t2 = _match(lit.atom, g, theta)
                if t2 is not None:
                    nxt.append(t2)
        thetas = nxt
        if not thetas:
            return
    variables = set()
    for lit in body:
        variables |= lit.atom.variables()
    for theta in thetas:
        free = sorted((v for v in variables if v not in theta), key=lambda t: t.label)
        choices = itertools.product([const(c) for c in universe], repeat=len(free)) if free else [()]
        for combo in choices:
            full = dict(theta)
            full.update(zip(free, combo))
            ok = True
            for lit in body:
                if lit.atom.is_builtin:
                    if eval_builtin(lit.atom.substitute(full)) == lit.negated:
                        ok = False
                        break
                elif lit.negated and lit.atom.substitute(full) in facts.all:
                    ok = False
                    break
            if ok:
                yield full


def _rule_strata(kb: KnowledgeBase):
    strat = stratify(kb)
    rules = kb.rules
    by_level = {}
    for r in rules:
        by_level.setdefault(strat[r.head.predicate], []).append(r)
    return [(lv, by_level[lv]) for lv in sorted(by_level)]


def _base_facts(kb: KnowledgeBase, extra: Iterable[Atom]) -> set:
    return set(kb.edb) | set(kb.immutable_facts) | set(extra)


def semi_naive_model(kb: KnowledgeBase, extra_facts: Iterable[Atom] = (), universe=None) -> frozenset:
    extra_facts = tuple(extra_facts)
    if universe is None:
        universe = herbrand_universe(kb, [t.label for a in extra_facts for t in a.args])
    facts = _Index(sorted_atoms(_base_facts(kb, extra_facts)))
    for _, rules in _rule_strata(kb):
        heads = {r.head.predicate for r in rules}
        delta = _Index()
        for r in rules:
            for theta in _solutions(r.body, facts, universe):
                h = r.head.substitute(theta)
                if h not in facts.all:
                    delta.add(h)
        while delta.all:
            for a in sorted_atoms(delta.all):
                facts.add(a)
            new = _Index()
            for r in rules:
                for i, lit in enumerate(r.body):
                    if lit.negated or lit.atom.is_builtin or lit.atom.predicate not in heads:
                        continue
                    if not delta.get(lit.atom.predicate):
                        continue
                    for theta in _solutions(r.body, facts, universe, (i, delta)):
                        h = r.head.substitute(theta)
                        if h not in facts.all:
                            new.add(h)
            delta = new
    return frozenset(facts.all)


def naive_model(kb: KnowledgeBase, extra_facts: Iterable[Atom] = ()) -> frozenset:
    """Oracle: naive stratum-wise iteration over the fully grounded program."""
    extra_facts = tuple(extra_facts)
    g = ground(kb, [t.label for a in extra_facts for t in a.args])
    strat = stratify(kb)
    model = _base_facts(kb, extra_facts)
    levels = sorted({strat[r.head.predicate] for r in g.rules})
    for lv in levels:
        rules = [r for r in g.rules if strat[r.head.predicate] == lv]
        changed = True
        while changed:
            changed = False
            derived = set()
            for r in rules:
                if all((l.atom in model) != l.negated for l in r.body):
                    derived.add(r.head)
            if not derived <= model:
                model |= derived
                changed = True
    return frozenset(model)


def least_herbrand_model(kb: KnowledgeBase, extra_facts: Iterable[Atom] = ()) -> HerbrandModel:
    """Stratum-wise least fixpoint, semi-naive."""
    extra = tuple(extra_facts)
    if not extra:
        got = kb._cache.get("model")
        if got is None:
            got = HerbrandModel(semi_naive_model(kb))
            kb._cache["model"] = got
        return got
    return HerbrandModel(semi_naive_model(kb, extra))


def check_known(kb: KnowledgeBase, goal: Atom):
    names = {(p.name, p.arity) for p in kb.predicates()}
    if (goal.predicate.name, goal.predicate.arity) not in names:
        raise UnknownPredicateError(f"unknown predicate {goal.predicate}")


def entails(kb: KnowledgeBase, goal: Atom, strict: bool = True) -> bool:
    if strict:
        check_known(kb, goal)
    return goal in least_herbrand_model(kb)


def body_witnesses(body: tuple, model: frozenset, universe) -> list:
    idx = _Index(model)
    out = []
    for theta in _solutions(body, idx, universe):
        inst = tuple(l.substitute(theta) for l in body if not l.atom.is_builtin)
        if inst not in out:
            out.append(inst)
    return out


def body_holds(body: tuple, model: frozenset, universe) -> bool:
    idx = _Index(model)
    for _ in _solutions(body, idx, universe):
        return True
    return False


def violated_constraints(
    kb: KnowledgeBase, request: Optional[Atom] = None, extra_facts: Iterable[Atom] = (), constraints=None
) -> ConstraintViolationSet:
    extra = list(extra_facts) + ([request] if request is not None else [])
    model = least_herbrand_model(kb, extra).atoms
    universe = herbrand_universe(kb, [t.label for a in extra for t in a.args])
    violated, witnesses = [], {}
    for c in kb.constraints if constraints is None else constraints:
        w = body_witnesses(c.body, model, universe)
        if w:
            violated.append(c)
            witnesses[c] = w
    return ConstraintViolationSet(tuple(violated), witnesses)


def satisfies_constraints(kb: KnowledgeBase, model: frozenset, constraints=None) -> bool:
    universe = herbrand_universe(kb)
    for c in kb.constraints if constraints is None else constraints:
        if body_holds(c.body, model, universe):
            return False
    return True


def holds(kb: KnowledgeBase, alpha: HornClause, model: Optional[frozenset] = None) -> bool:
    """A fact holds when derivable; a denial holds when its body is not satisfied."""
    if model is None:
        model = least_herbrand_model(kb).atoms
    if alpha.kind == "constraint":
        return not body_holds(alpha.body, model, herbrand_universe(kb))
    if alpha.kind == "fact":
        return alpha.head in model
    # a rule holds when every ground instance with a true body has a true head
    universe = herbrand_universe(kb)
    for theta in _solutions(alpha.body, _Index(model), universe):
        if alpha.head.substitute(theta) not in model:
            return False
    return True


def consistent_with(kb: KnowledgeBase, alpha: Optional[HornClause] = None) -> bool:
    """kb ∪ {α} is consistent: the model extended by α violates no constraint (α included if a denial)."""
    extra = [alpha.head] if alpha is not None and alpha.kind == "fact" else []
    cons = list(kb.constraints) + ([alpha] if alpha is not None and alpha.kind == "constraint" else [])
    kb2 = kb
    if alpha is not None and alpha.kind == "rule":
        kb2 = KnowledgeBase(kb.immutable + (alpha,), kb.updatable, kb.constraints, kb.declared_abducibles)
    model = least_herbrand_model(kb2, extra).atoms
    return satisfies_constraints(kb2, model, cons)


class EquivalenceBoundError(HkbError):
    pass


def dependency_cone(kb: KnowledgeBase, atoms: Iterable[Atom]) -> set:
    """Ground atoms the truth of `atoms` can depend on, through ground rule instances."""
    g = ground(kb, [t.label for a in atoms for t in a.args])
    by_head = {}
    for r in g.rules:
        by_head.setdefault(r.head, []).append(r)
    seen, stack = set(), list(atoms)
    while stack:
        a = stack.pop()
        if a in seen:
            continue
        seen.add(a)
        for r in by_head.get(a, ()):
            stack.extend(l.atom for l in r.body)
    return seen


def kb_equivalent(kb: KnowledgeBase, alpha: HornClause, beta: HornClause, bound: int = 16) -> bool:
    """For every fact set E over the relevant Herbrand base: KB_I∪E∪IC ⊢ α iff ⊢ β.

    An E violating IC entails everything. The relevant base is the dependency
    cone of α, β and the constraint bodies; atoms outside it cannot change
    either side.
    """
    if alpha == beta:
        return True
    roots = list(alpha.atoms()) + list(beta.atoms())
    g = ground(kb, [t.label for a in roots for t in a.args])
    for c in g.constraints:
        roots.extend(l.atom for l in c.body)
    cone = sorted_atoms(dependency_cone(kb, roots))
    if len(cone) > bound:
        raise EquivalenceBoundError(f"relevant Herbrand base has {len(cone)} atoms (> {bound})")
    rules_only = KnowledgeBase(kb.immutable, (), kb.constraints, kb.declared_abducibles)
    universe = herbrand_universe(rules_only, [t.label for a in roots for t in a.args])
    for r in range(len(cone) + 1):
        for e in itertools.combinations(cone, r):
            model = semi_naive_model(rules_only, e, universe)
            if not all(not body_holds(c.body, model, universe) for c in rules_only.constraints):
                continue
            if _holds_in(alpha, model, universe) != _holds_in(beta, model, universe):
                return False
    return True


def _holds_in(alpha: HornClause, model, universe) -> bool:
    if alpha.kind == "constraint":
        return not body_holds(alpha.body, model, universe)
    return alpha.head in model
