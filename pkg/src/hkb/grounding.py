"""Grounding over the Herbrand universe and stratification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    Atom,
    HkbError,
    HornClause,
    KnowledgeBase,
    Literal,
    PredicateSymbol,
    Term,
    const,
)

FRESH_CONSTANT = "@u0"


class NotStratifiableError(HkbError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__("not stratifiable: negative cycle " + " -> ".join(str(p) for p in cycle))


def herbrand_universe(kb: KnowledgeBase, extra=()) -> list:
    consts = set(kb.constants()) | {c for c in extra}
    if not consts:
        return [FRESH_CONSTANT]
    return sorted(consts)


def eval_builtin(a: Atom) -> bool:
    left, right = a.args
    return left.label != right.label


def simplify_ground(clause: HornClause):
    """Evaluate built-ins in a ground clause; None if some built-in is false."""
    body = []
    for lit in clause.body:
        if lit.atom.is_builtin:
            truth = eval_builtin(lit.atom) != lit.negated
            if not truth:
                return None
            continue
        body.append(lit)
    if len(body) == len(clause.body):
        return clause
    return HornClause(clause.head, tuple(body))


def ground_clause(clause: HornClause, universe) -> list:
    """All ground instances in variable-name order, with built-ins evaluated."""
    variables = sorted(clause.variables(), key=lambda t: t.label)
    if not variables:
        g = simplify_ground(clause)
        return [g] if g is not None else []
    terms = [const(c) for c in universe]
    out = []
    for combo in itertools.product(terms, repeat=len(variables)):
        g = simplify_ground(clause.substitute(dict(zip(variables, combo))))
        if g is not None:
            out.append(g)
    return out


def _dedupe(clauses):
    seen, out = set(), []
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return tuple(out)


def ground(kb: KnowledgeBase, extra_constants=()) -> KnowledgeBase:
    """Replace every rule and constraint by its ground instances over the Herbrand universe."""
    universe = herbrand_universe(kb, extra_constants)
    immutable = _dedupe(g for c in kb.immutable for g in ground_clause(c, universe))
    constraints = _dedupe(g for c in kb.constraints for g in ground_clause(c, universe))
    return KnowledgeBase(immutable, kb.updatable, constraints, kb.declared_abducibles or kb.abducibles, kb.ddb)


@dataclass(frozen=True)
class Stratification:
    level: dict = field(default_factory=dict)

    def __getitem__(self, p: PredicateSymbol) -> int:
        return self.level.get(p, 0)

    def strata(self) -> list:
        top = max(self.level.values(), default=0)
        return [sorted(p for p, v in self.level.items() if v == k) for k in range(top + 1)]


def dependency_edges(kb: KnowledgeBase):
    """(head, body predicate, negated) for every rule literal."""
    for c in kb.immutable:
        if c.kind != "rule":
            continue
        for lit in c.body:
            if not lit.atom.is_builtin:
                yield c.head.predicate, lit.atom.predicate, lit.negated


def _sccs(nodes, succ):
    """Tarjan's strongly connected components, iterative."""
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def stratify(kb: KnowledgeBase) -> Stratification:
    """Level mapping: abducible or undefined predicates at 0, a head above every
    body predicate of a lower component, strictly above negated ones."""
    preds = sorted(kb.predicates())
    edges = list(dependency_edges(kb))
    succ = {}
    for h, b, _ in edges:
        succ.setdefault(h, set()).add(b)
    comps = _sccs(preds, {k: sorted(v) for k, v in succ.items()})
    comp_of = {p: i for i, comp in enumerate(comps) for p in comp}
    for h, b, negated in edges:
        if negated and comp_of[h] == comp_of[b]:
            raise NotStratifiableError(_negative_cycle(h, b, succ))
    # Tarjan emits components in reverse topological order (dependencies first).
    defined = kb.view_predicates()
    level = {}
    for comp in comps:
        members = set(comp)
        lv = 0
        if any(p in defined for p in comp):
            lv = 1
            for h, b, negated in edges:
                if h in members and b not in members:
                    lv = max(lv, level[b] + 1)
        for p in comp:
            level[p] = lv if p in defined else 0
    return Stratification(level)


def _negative_cycle(head, body, succ):
    """Cycle head -> body -> ... -> head closing the negative edge head -> body."""
    prev = {body: None}
    frontier = [body]
    while frontier and head not in prev:
        nxt = []
        for v in frontier:
            for w in sorted(succ.get(v, ())):
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    path, v = [], head
    while v is not None:
        path.append(v)
        v = prev.get(v)
    path.reverse()
    return [head] + path if head != body else [head, head]
