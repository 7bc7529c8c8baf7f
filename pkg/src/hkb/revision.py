"""Generalized revision of a Horn knowledge base by a ground fact or denial."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .abduction import (
    DEFAULT_DEPTH,
    ExplanationSet,
    build_sld_tree,
    deletion_explanations,
    insertion_explanations,
    minimal_explanations,
)
from .change import alpha_admissible
from .core import HkbError, HornClause, KnowledgeBase, fact, sorted_atoms


class RevisionError(HkbError):
    pass


@dataclass(frozen=True)
class TraceStep:
    label: str
    text: str

    def __str__(self):
        return f"({self.label}) {self.text}"


@dataclass(frozen=True)
class RevisionOutcome:
    kb_after: KnowledgeBase
    inserted: frozenset = frozenset()
    deleted: frozenset = frozenset()
    trace: tuple = field(default=(), compare=False)
    status: str = "revised"  # revised | unchanged | unsatisfiable | impossible
    explanation: Optional[ExplanationSet] = field(default=None, compare=False)

    def __post_init__(self):
        if self.inserted & self.deleted:
            raise RevisionError("an atom is both inserted and deleted")

    def key(self):
        return (len(self.inserted) + len(self.deleted), _names(self.inserted), _names(self.deleted))

    def render_trace(self) -> str:
        return "\n".join(str(s) for s in self.trace)


def _names(atoms) -> list:
    return [str(a) for a in sorted_atoms(atoms)]


def _short(c: HornClause) -> str:
    body = ",".join(str(l) for l in c.body)
    if c.kind == "fact":
        return str(c.head)
    if c.kind == "constraint":
        return f"<- {body}"
    return f"{c.head} <- {body}"


def _clause_list(clauses) -> str:
    return "{" + "; ".join(_short(c) for c in clauses) + "}"


def _set(atoms) -> str:
    return "{" + ", ".join(_names(atoms)) + "}"


def _check_alpha(kb: KnowledgeBase, alpha: HornClause):
    if not alpha.is_ground:
        raise RevisionError(f"revision needs a ground clause, got {alpha}")
    if alpha.kind == "rule":
        raise RevisionError("revision by a rule is not supported; use a fact or a denial")


def _family(kb: KnowledgeBase, alpha: HornClause, ic_order: str, depth_limit: int):
    if alpha.kind == "fact":
        return insertion_explanations(kb, alpha.head, ic_order, depth_limit)
    return deletion_explanations(kb, alpha.body, depth_limit)


def _apply(kb: KnowledgeBase, e: ExplanationSet) -> KnowledgeBase:
    edb = (kb.edb - e.minus) | e.plus
    return KnowledgeBase(kb.immutable, tuple(fact(a) for a in sorted_atoms(edb)), kb.constraints,
                         kb.declared_abducibles, kb.ddb)


def _trace(kb: KnowledgeBase, alpha: HornClause, e: Optional[ExplanationSet], kb_after: KnowledgeBase,
           depth_limit: int) -> tuple:
    goal = alpha.head if alpha.kind == "fact" else alpha.body
    tree = build_sld_tree(kb, goal, depth_limit, abduce=True)
    tree_atoms = tree.atoms()
    roots = {l.atom for l in tree.root}
    tree_preds = {a.predicate for a in tree_atoms}
    relevant = [c for c in kb.constraints if any(a.predicate in tree_preds for a in c.atoms() if not a.is_builtin)]
    v_atoms = {a for c in relevant for a in c.atoms()}
    p = {a for a in tree_atoms if a not in roots and a not in v_atoms and not a.is_builtin}
    n = {a for a in tree_atoms if a in kb.edb}
    steps = [
        TraceStep("Input", f"KB_I: {_clause_list(kb.immutable)} KB_U: {_clause_list(kb.updatable)} "
                           f"KB_IC: {_clause_list(kb.constraints)} alpha: {_short(alpha)}"),
        TraceStep("0", _clause_list(tuple(kb.immutable) + tuple(kb.updatable))),
        TraceStep("1", "{V = " + "; ".join(",".join(str(l) for l in c.body) for c in relevant) + "}"),
        TraceStep("2", f"{{P = {_set(p)} and N = {_set(n)}}}"),
        TraceStep("2.1", f"{{Delta+ = {_set(p)} and Delta- = {_set(n)}}}"),
    ]
    if e is not None:
        shown_plus = e.support if alpha.kind == "fact" and e.support else e.plus
        steps.append(TraceStep("2.2", f"{{Delta+ = {_set(shown_plus)} and Delta- = {_set(e.minus)}}}"))
        rules = tuple(dict.fromkeys(e.rules))
        steps.append(TraceStep("3", _clause_list(rules + tuple(kb_after.updatable))))
    steps.append(TraceStep("Output", f"KB_I: {_clause_list(kb_after.immutable)} "
                                     f"KB_U*: {_clause_list(kb_after.updatable)} "
                                     f"KB_IC: {_clause_list(kb_after.constraints)}"))
    return tuple(steps)


def all_minimal_revisions(
    kb: KnowledgeBase,
    alpha: HornClause,
    ic_order: str = "check-first",
    depth_limit: int = DEFAULT_DEPTH,
    trace: bool = True,
) -> list:
    """One outcome per componentwise-minimal explanation pair, canonically ordered.

    An α inconsistent with KB_I ∪ KB_IC leaves kb unchanged (status
    "unsatisfiable"); an α that already holds leaves it unchanged too.
    """
    _check_alpha(kb, alpha)
    if not alpha_admissible(kb, alpha):
        steps = (TraceStep("Input", f"alpha {_short(alpha)} is inconsistent with KB_I and KB_IC"),) if trace else ()
        return [RevisionOutcome(kb, trace=steps, status="unsatisfiable")]
    fam = minimal_explanations(_family(kb, alpha, ic_order, depth_limit))
    out = []
    for e in fam.members:
        after = _apply(kb, e)
        inserted = frozenset(e.plus - kb.edb)
        deleted = frozenset(e.minus & kb.edb)
        status = "revised" if inserted or deleted else "unchanged"
        steps = _trace(kb, alpha, e, after, depth_limit) if trace else ()
        out.append(RevisionOutcome(after, inserted, deleted, steps, status, e))
    if not out:
        steps = _trace(kb, alpha, None, kb, depth_limit) if trace else ()
        return [RevisionOutcome(kb, trace=steps, status="impossible")]
    seen, uniq = set(), []
    for o in sorted(out, key=RevisionOutcome.key):
        k = (o.inserted, o.deleted)
        if k not in seen:
            seen.add(k)
            uniq.append(o)
    return uniq


def generalized_revision(
    kb: KnowledgeBase,
    alpha: HornClause,
    ic_order: str = "check-first",
    depth_limit: int = DEFAULT_DEPTH,
    trace: bool = True,
) -> RevisionOutcome:
    """Algorithm 1: the canonically first minimal outcome."""
    return all_minimal_revisions(kb, alpha, ic_order, depth_limit, trace)[0]
