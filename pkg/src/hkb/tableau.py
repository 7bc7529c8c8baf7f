"""IDB transformations and a hyper-tableau engine over ground disjunctive clauses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import Atom, HkbError, KnowledgeBase, sorted_atoms
from .semantics import least_herbrand_model

NODE_CAP = 100_000


class TableauError(HkbError):
    pass


class NotDefiniteError(TableauError):
    pass


class BranchExplosionError(TableauError):
    pass


@dataclass(frozen=True, order=True)
class TLit:
    """A transformed atom; neg=True is the deletion atom ¬A, read as a positive atom of a renamed predicate."""

    atom: Atom
    neg: bool = False

    def complement(self) -> "TLit":
        return TLit(self.atom, not self.neg)

    def sort_key(self):
        return (self.atom.sort_key(), self.neg)

    def __str__(self):
        return f"¬{self.atom}" if self.neg else str(self.atom)

    def latex(self) -> str:
        return f"\\neg {self.atom}" if self.neg else str(self.atom)


@dataclass(frozen=True)
class DClause:
    """head_1 ∨ … ∨ head_m ← body_1 ∧ … ∧ body_n; empty head is a denial."""

    head: tuple = ()
    body: tuple = ()

    def __str__(self):
        left = " ∨ ".join(map(str, self.head))
        right = " ∧ ".join(map(str, self.body))
        return " ".join(s for s in (left, "←", right) if s)

    def latex(self) -> str:
        left = " \\lor ".join(l.latex() for l in self.head)
        right = " \\wedge ".join(l.latex() for l in self.body)
        return " ".join(s for s in (left, "\\leftarrow", right) if s)


@dataclass(frozen=True)
class TransformedProgram:
    kind: str  # idb-star | idb-bullet-body | idb-bullet-head | idb-plus | idb-minus-body | idb-minus-head
    clauses: tuple = ()

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self):
        return len(self.clauses)

    def lines(self) -> list:
        return [str(c) for c in self.clauses]

    def latex_lines(self) -> list:
        return [c.latex() for c in self.clauses]


def ground_rules(ddb: KnowledgeBase) -> tuple:
    from .abduction import ground_program

    rules = ground_program(ddb).rules
    for r in rules:
        if any(l.negated for l in r.body):
            raise NotDefiniteError(f"the transformations need a definite IDB; {r} has a negated literal")
    return rules


def transform_clause(rule, s, move_head=True, move_body=True) -> DClause:
    """Move every atom of rule that lies in s across the arrow, negated."""
    h = rule.head
    head, body = [], []
    if move_head and h in s:
        body.append(TLit(h, True))
    else:
        head.append(TLit(h))
    for l in rule.body:
        if move_body and l.atom in s:
            head.append(TLit(l.atom, True))
        else:
            body.append(TLit(l.atom))
    return DClause(tuple(head), tuple(body))


def _s0(ddb: KnowledgeBase, rules) -> frozenset:
    return ddb.edb | {a for r in rules for a in (r.head, *(l.atom for l in r.body))}


def transform_idb(rules, s, kind, move_head=True, move_body=True) -> TransformedProgram:
    return TransformedProgram(kind, tuple(transform_clause(r, s, move_head, move_body) for r in rules))


def transform_idb_star(ddb: KnowledgeBase) -> TransformedProgram:
    rules = ground_rules(ddb)
    return transform_idb(rules, _s0(ddb, rules), "idb-star")


def transform_idb_bullet(ddb: KnowledgeBase) -> tuple:
    """(body-empty form, head-empty form)."""
    rules = ground_rules(ddb)
    s = _s0(ddb, rules)
    return (transform_idb(rules, s, "idb-bullet-body", move_head=False),
            transform_idb(rules, s, "idb-bullet-head", move_body=False))


def transform_materialized(ddb: KnowledgeBase, model=None) -> dict:
    """IDB+ (deletion) and both IDB− forms (insertion) with respect to model, the least Herbrand model by default."""
    rules = ground_rules(ddb)
    s = frozenset(least_herbrand_model(ddb).atoms if model is None else model)
    return {
        "idb-plus": transform_idb(rules, s, "idb-plus"),
        "idb-minus-body": transform_idb(rules, s, "idb-minus-body", move_head=False),
        "idb-minus-head": transform_idb(rules, s, "idb-minus-head", move_body=False),
    }


# hyper tableau ----------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    literals: tuple
    status: str  # open | closed
    hitting_set: frozenset = frozenset()
    reason: str = ""  # complementary | denial | minimality
    index: int = 0

    @property
    def is_open(self) -> bool:
        return self.status == "open"

    def render(self) -> str:
        hs = "{" + ", ".join(str(a) for a in sorted_atoms(self.hitting_set)) + "}"
        tag = "open" if self.is_open else f"closed:{self.reason}"
        return f"b{self.index}: " + ", ".join(map(str, self.literals)) + f"  HS={hs}  [{tag}]"


@dataclass(frozen=True)
class Tableau:
    seed: object
    clauses: tuple
    branches: tuple = ()
    nodes: int = 0
    extensions: tuple = field(default=(), compare=False)

    def open_branches(self) -> list:
        return [b for b in self.branches if b.is_open]

    def hitting_sets(self) -> list:
        return [b.hitting_set for b in self.open_branches()]

    def render(self) -> str:
        return "\n".join(b.render() for b in self.branches)


def _complement(x):
    return x.complement()


def hyper_tableau(
    clauses,
    seed,
    hitting_set: Optional[Callable] = None,
    node_cap: int = NODE_CAP,
) -> Tableau:
    """Regular hyper tableau for clauses ∪ {seed ←}, every open branch finished.

    The extending clause is the first applicable clause (clause order) with no
    head literal on the branch; new branches are the head literals left to
    right, then the complements of the body literals, which are closed at once.
    """
    clauses = tuple(clauses)
    by_body = {}
    for i, c in enumerate(clauses):
        for l in c.body:
            by_body.setdefault(l, []).append(i)
    empty_body = [i for i, c in enumerate(clauses) if not c.body]
    hs = hitting_set or (lambda lits: frozenset())
    out = []
    nodes = 1
    stack = [((seed,), None)]
    while stack:
        lits, closed_reason = stack.pop()
        if closed_reason is not None:
            out.append(Branch(lits, "closed", hs(lits), closed_reason))
            continue
        on = set(lits)
        chosen = None
        cands = sorted(set(empty_body).union(*[by_body.get(l, ()) for l in lits]))
        for i in cands:
            c = clauses[i]
            if all(l in on for l in c.body) and not any(h in on for h in c.head):
                chosen = c
                break
        if chosen is None:
            out.append(Branch(lits, "open", hs(lits)))
            continue
        if chosen.head:
            new = [(lits + (h,), "complementary" if _complement(h) in on else None) for h in chosen.head]
            new += [(lits + (_complement(l),), "complementary") for l in chosen.body]
        else:
            new = [(lits + (_complement(l),), "denial") for l in chosen.body] or [(lits, "denial")]
        nodes += len(new)
        if nodes > node_cap:
            raise BranchExplosionError(f"hyper tableau exceeded {node_cap} nodes")
        stack.extend(reversed(new))
    return Tableau(seed, clauses, tuple(_renumber(out)), nodes)


def _renumber(branches) -> list:
    return [Branch(b.literals, b.status, b.hitting_set, b.reason, i + 1) for i, b in enumerate(branches)]


def close_branches(tableau: Tableau, failing, reason: str = "minimality") -> Tableau:
    """Mark open branches whose index is in failing as closed."""
    failing = set(failing)
    bs = tuple(Branch(b.literals, "closed", b.hitting_set, reason, b.index) if b.is_open and b.index in failing else b
               for b in tableau.branches)
    return Tableau(tableau.seed, tableau.clauses, bs, tableau.nodes)


def deletion_hitting_set(edb) -> Callable:
    """HS(b) = {A ∈ EDB | ¬A ∈ b}."""
    edb = frozenset(edb)
    return lambda lits: frozenset(l.atom for l in lits if isinstance(l, TLit) and l.neg and l.atom in edb)
