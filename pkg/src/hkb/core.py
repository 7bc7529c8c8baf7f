"""Language types for Horn knowledge bases and deductive databases."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional


class HkbError(Exception):
    """Base class for all library errors."""


class KbStructureError(HkbError):
    """A knowledge base violates a structural invariant."""


class UnknownPredicateError(HkbError):
    """A goal mentions a predicate that does not occur in the knowledge base."""


NEQ = "!="


@dataclass(frozen=True, order=True)
class PredicateSymbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise KbStructureError("predicate name must be non-empty")
        if self.arity < 0:
            raise KbStructureError("arity must be non-negative")

    def __str__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, order=True)
class Term:
    kind: str  # "constant" or "variable"
    label: str

    def __post_init__(self):
        if self.kind not in ("constant", "variable"):
            raise KbStructureError(f"bad term kind {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == "variable"

    def __str__(self):
        return self.label


def const(label: str) -> Term:
    return Term("constant", label)


def var(label: str) -> Term:
    return Term("variable", label)


@dataclass(frozen=True, order=True)
class Atom:
    predicate: PredicateSymbol
    args: tuple = ()

    def __post_init__(self):
        if len(self.args) != self.predicate.arity:
            raise KbStructureError(
                f"{self.predicate.name} expects {self.predicate.arity} arguments, got {len(self.args)}"
            )

    @property
    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)

    @property
    def is_builtin(self) -> bool:
        return self.predicate.name == NEQ

    def variables(self) -> set:
        return {t for t in self.args if t.is_var}

    def substitute(self, theta: dict) -> "Atom":
        if not theta:
            return self
        return Atom(self.predicate, tuple(theta.get(t, t) for t in self.args))

    def sort_key(self):
        return (self.predicate.name, self.predicate.arity, tuple(t.label for t in self.args))

    def __str__(self):
        if self.is_builtin:
            return f"{self.args[0]} != {self.args[1]}"
        if not self.args:
            return self.predicate.name
        return f"{self.predicate.name}({','.join(str(t) for t in self.args)})"


def atom(name: str, *args: str) -> Atom:
    """Build an atom from plain strings; uppercase-initial arguments become variables."""
    terms = tuple(var(a) if _is_var_name(a) else const(a) for a in args)
    return Atom(PredicateSymbol(name, len(terms)), terms)


def neq(left: Term, right: Term) -> Atom:
    return Atom(PredicateSymbol(NEQ, 2), (left, right))


def _is_var_name(label: str) -> bool:
    return bool(label) and (label[0].isupper() or label[0] == "_")


@dataclass(frozen=True, order=True)
class Literal:
    atom: Atom
    negated: bool = False

    def substitute(self, theta: dict) -> "Literal":
        return Literal(self.atom.substitute(theta), self.negated)

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True, order=True)
class HornClause:
    head: Optional[Atom]
    body: tuple = ()

    @property
    def kind(self) -> str:
        if self.head is None:
            return "constraint"
        return "fact" if not self.body else "rule"

    @property
    def is_ground(self) -> bool:
        atoms = ([self.head] if self.head is not None else []) + [l.atom for l in self.body]
        return all(a.is_ground for a in atoms)

    def variables(self) -> set:
        out = set(self.head.variables()) if self.head is not None else set()
        for lit in self.body:
            out |= lit.atom.variables()
        return out

    def substitute(self, theta: dict) -> "HornClause":
        head = self.head.substitute(theta) if self.head is not None else None
        return HornClause(head, tuple(l.substitute(theta) for l in self.body))

    def atoms(self):
        if self.head is not None:
            yield self.head
        for lit in self.body:
            yield lit.atom

    def sort_key(self):
        return str(self)

    def __str__(self):
        body = ", ".join(str(l) for l in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


def fact(a: Atom) -> HornClause:
    return HornClause(a, ())


def denial(*body: Literal) -> HornClause:
    return HornClause(None, tuple(body))


def sorted_atoms(atoms: Iterable[Atom]) -> list:
    return sorted(set(atoms), key=Atom.sort_key)


@dataclass(frozen=True)
class KnowledgeBase:
    """KB_I (immutable), KB_U (updatable ground facts) and KB_IC (denials).

    Read as a deductive database the same triple is IDB, EDB and IC.
    Clause order of the immutable part is file order and fixes SLD tree shape.
    """

    immutable: tuple = ()
    updatable: tuple = ()
    constraints: tuple = ()
    declared_abducibles: Optional[frozenset] = None
    ddb: bool = False
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.updatable)) != len(self.updatable):
            raise KbStructureError("duplicate updatable facts")
        for c in self.updatable:
            if c.kind != "fact" or not c.is_ground:
                raise KbStructureError(f"updatable clause {c} is not a ground fact")
        for c in self.constraints:
            if c.kind != "constraint":
                raise KbStructureError(f"constraint {c} has a head")
        for c in self.immutable:
            if c.kind == "constraint":
                raise KbStructureError(f"immutable clause {c} is a denial")
        clash = set(self.immutable) & set(self.updatable)
        if clash:
            raise KbStructureError(f"clause both immutable and updatable: {sorted(map(str, clash))[0]}")
        arities = {}
        for c in self.all_clauses():
            for a in c.atoms():
                if a.is_builtin:
                    continue
                seen = arities.setdefault(a.predicate.name, a.predicate.arity)
                if seen != a.predicate.arity:
                    raise KbStructureError(f"arity conflict for {a.predicate.name}: {seen} vs {a.predicate.arity}")
        if self.ddb:
            check_ddb(self)

    # construction helpers
    def all_clauses(self):
        return tuple(self.immutable) + tuple(self.updatable) + tuple(self.constraints)

    @property
    def edb(self) -> frozenset:
        got = self._cache.get("edb")
        if got is None:
            got = frozenset(c.head for c in self.updatable)
            self._cache["edb"] = got
        return got

    @property
    def rules(self) -> tuple:
        return tuple(c for c in self.immutable if c.kind == "rule")

    @property
    def immutable_facts(self) -> frozenset:
        return frozenset(c.head for c in self.immutable if c.kind == "fact")

    def with_edb(self, atoms: Iterable[Atom]) -> "KnowledgeBase":
        facts = tuple(fact(a) for a in sorted_atoms(atoms))
        return KnowledgeBase(self.immutable, facts, self.constraints, self.declared_abducibles, self.ddb)

    def with_constraints(self, constraints: Iterable[HornClause]) -> "KnowledgeBase":
        return KnowledgeBase(self.immutable, self.updatable, tuple(constraints), self.declared_abducibles, self.ddb)

    def predicates(self) -> set:
        return {a.predicate for c in self.all_clauses() for a in c.atoms() if not a.is_builtin}

    def view_predicates(self) -> set:
        return {c.head.predicate for c in self.immutable if c.kind == "rule"}

    def base_predicates(self) -> set:
        return {a.predicate for a in self.edb}

    @property
    def abducibles(self) -> frozenset:
        """Declared abducibles, else EDB predicates plus predicates with no defining rule."""
        if self.declared_abducibles is not None:
            return self.declared_abducibles
        defined = self.view_predicates()
        return frozenset(self.base_predicates() | (self.predicates() - defined))

    def constants(self) -> list:
        got = self._cache.get("constants")
        if got is None:
            got = sorted({t.label for c in self.all_clauses() for a in c.atoms() for t in a.args if not t.is_var})
            self._cache["constants"] = got
        return got

    def same_content(self, other: "KnowledgeBase") -> bool:
        return (
            self.immutable == other.immutable
            and set(self.updatable) == set(other.updatable)
            and set(self.constraints) == set(other.constraints)
        )


def check_ddb(kb: KnowledgeBase):
    """DDB reading: no unit clauses in IDB and no predicate both view and base."""
    for c in kb.immutable:
        if c.kind == "fact":
            raise KbStructureError(f"IDB contains the unit clause {c}")
    both = kb.view_predicates() & kb.base_predicates()
    if both:
        p = sorted(both)[0]
        raise KbStructureError(f"predicate {p} is both view and base")
