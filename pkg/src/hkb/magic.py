"""View-update (∇) rules over a normalized IDB, instantiated lazily from the seeds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import Atom, HkbError, HornClause, KnowledgeBase, Literal, PredicateSymbol, Term, const, sorted_atoms, var
from .grounding import herbrand_universe
from .semantics import semi_naive_model
from .tableau import DClause

FRESH_PREFIX = "@new"
INSTANCE_CAP = 20_000


class NotNormalizableError(HkbError):
    pass


class NotTrueUpdateError(HkbError):
    pass


@dataclass(frozen=True, order=True)
class Delta:
    """∇+A (insert) or ∇−A (delete); positive=False is its tableau complement."""

    sign: str
    atom: Atom
    positive: bool = True

    def complement(self) -> "Delta":
        return Delta(self.sign, self.atom, not self.positive)

    def substitute(self, theta) -> "Delta":
        return Delta(self.sign, self.atom.substitute(theta), self.positive)

    def sort_key(self):
        return (self.sign, self.atom.sort_key(), self.positive)

    def __str__(self):
        s = f"∇{'+' if self.sign == '+' else '−'}{self.atom}"
        return s if self.positive else f"¬{s}"


@dataclass(frozen=True)
class VuRule:
    """trigger ∧ guards → consequent_1 ∨ … ∨ consequent_k.

    Guards are literals over the current model. A consequent with a projected
    variable stands for one disjunct per constant plus one fresh constant.
    """

    trigger: Delta
    guards: tuple = ()
    consequents: tuple = ()
    project: object = None
    case: str = ""

    def __str__(self):
        body = " ∧ ".join([str(self.trigger)] + [f"¬{l.atom}" if l.negated else str(l.atom) for l in self.guards])
        if self.project is None:
            head = " ∨ ".join(map(str, self.consequents))
        else:
            c = self.consequents[0]
            head = " ∨ ".join(str(c.substitute({self.project: const(x)})) for x in ("c1", "…", "c_new"))
        return f"{body} → {head}"


@dataclass(frozen=True)
class VuRuleSet:
    seeds: tuple
    rules: tuple
    normalized: KnowledgeBase
    auxiliary: frozenset = frozenset()
    clauses: tuple = ()
    fresh: tuple = ()
    relies: dict = field(default_factory=dict, compare=False)

    def lines(self) -> list:
        return [str(r) for r in self.rules]

    def support(self, lits, edb) -> frozenset:
        """Stored facts the branch's derivation relies on: the cone of the true conjuncts it skipped."""
        true = set().union(*[self.relies.get(l, ()) for l in lits]) if lits else set()
        by_head = {}
        for r in self.normalized.rules:
            by_head.setdefault(r.head.predicate, []).append(r)
        out, stack, seen = set(), list(true), set()
        while stack:
            a = stack.pop()
            if a in seen:
                continue
            seen.add(a)
            if a in edb:
                out.add(a)
            for r in by_head.get(a.predicate, ()):
                theta = _match(r.head, a)
                if theta is None:
                    continue
                for l in r.body:
                    b = l.atom.substitute(theta)
                    if b.is_ground:
                        stack.append(b)
                    else:
                        stack.extend(f for f in edb if _match(b, f) is not None)
        return frozenset(out)


# normalization ------------------------------------------------------------------


class _Normalizer:
    def __init__(self, ddb: KnowledgeBase):
        self.ddb = ddb
        self.rules = []
        self.aux = set()
        self.count = 0
        self.names = {p.name for p in ddb.predicates()}

    def fresh(self, base: str, args) -> Atom:
        self.count += 1
        name = f"{base}#{self.count}"
        while name in self.names:
            self.count += 1
            name = f"{base}#{self.count}"
        p = PredicateSymbol(name, len(args))
        self.aux.add(p)
        return Atom(p, tuple(args))

    def add(self, head, body):
        self.rules.append(HornClause(head, tuple(body)))

    def run(self) -> list:
        by_pred = {}
        for r in self.ddb.rules:
            by_pred.setdefault(r.head.predicate, []).append(r)
        for p, rs in by_pred.items():
            for r in rs:
                self._check(r)
            head = _canonical_head(p)
            bodies = [_rename(r, head) for r in rs]
            if len(bodies) == 1:
                self.body(head, bodies[0])
            else:
                self.union(head, bodies)
        return self.rules

    def _check(self, r: HornClause):
        args = r.head.args
        if any(not t.is_var for t in args):
            raise NotNormalizableError(f"head {r.head} has a constant")
        if len(set(args)) != len(args):
            raise NotNormalizableError(f"head {r.head} repeats a variable")
        if any(l.atom.is_builtin for l in r.body):
            raise NotNormalizableError(f"rule {r} uses a built-in")
        pos = set().union(*[l.atom.variables() for l in r.body if not l.negated]) if r.body else set()
        if not r.head.variables() <= pos or any(not l.atom.variables() <= pos for l in r.body if l.negated):
            raise NotNormalizableError(f"rule {r} is unsafe")

    def union(self, head: Atom, bodies):
        """p ← x1 and p ← u with u covering the remaining rules, nested pairwise."""
        first, rest = bodies[0], bodies[1:]
        left = self.disjunct(head, first)
        self.add(head, (Literal(left),))
        if len(rest) == 1:
            right = self.disjunct(head, rest[0])
        else:
            right = self.fresh(head.predicate.name + "_or", head.args)
            self.union(right, rest)
        self.add(head, (Literal(right),))

    def disjunct(self, head: Atom, body) -> Atom:
        if len(body) == 1 and not body[0].negated and body[0].atom.variables() == head.variables() \
                and len(body[0].atom.args) == len(set(body[0].atom.args)) == len(head.args):
            return body[0].atom
        aux = self.fresh(head.predicate.name + "_r", head.args)
        self.body(aux, body)
        return aux

    def body(self, head: Atom, body):
        """Project away existential variables, then split the conjunction."""
        hv = list(head.args)
        extra = sorted({t for l in body for t in l.atom.variables()} - set(hv))
        if extra:
            inner = self.fresh(head.predicate.name + "_p", hv + [extra[0]])
            self.add(head, (Literal(inner),))
            self.body(inner, body)
            return
        self.conj(head, list(body))

    def conj(self, head: Atom, lits):
        lits = [l for l in lits if not l.negated] + [l for l in lits if l.negated]
        if len(lits) == 1:
            l = lits[0]
            if l.negated and head.args:
                raise NotNormalizableError(f"{head} ← not {l.atom} is unsafe")
            self.add(head, (l,))
            return
        if lits[-1].negated:
            rest = lits[:-1]
            self.add(head, (Literal(self.part(rest, head)), lits[-1]))
            return
        self.add(head, (lits[0], Literal(self.part(lits[1:], head))))

    def part(self, lits, head: Atom) -> Atom:
        if len(lits) == 1 and not lits[0].negated:
            return lits[0].atom
        vs = sorted({t for l in lits for t in l.atom.variables()})
        aux = self.fresh(head.predicate.name + "_c", vs)
        self.conj(aux, lits)
        return aux


def _canonical_head(p: PredicateSymbol) -> Atom:
    return Atom(p, tuple(var(f"X{i}") for i in range(p.arity)))


def _rename(r: HornClause, head: Atom) -> tuple:
    """Body of r with head variables renamed to head's and the others made distinct."""
    theta = dict(zip(r.head.args, head.args))
    taken = {t.label for t in head.args}
    for v in sorted({t for l in r.body for t in l.atom.variables()} - set(theta)):
        n = 0
        while f"Y{n}" in taken:
            n += 1
        taken.add(f"Y{n}")
        theta[v] = var(f"Y{n}")
    return tuple(l.substitute(theta) for l in r.body)


def normalize(ddb: KnowledgeBase) -> tuple:
    """(normalized KB, auxiliary predicates); every rule has at most two body literals."""
    n = _Normalizer(ddb)
    rules = n.run()
    kb = KnowledgeBase(tuple(rules), ddb.updatable, ddb.constraints, ddb.declared_abducibles)
    return kb, frozenset(n.aux)


# VU rules ---------------------------------------------------------------------


def vu_rules(normalized: KnowledgeBase) -> list:
    by_pred = {}
    for r in normalized.rules:
        by_pred.setdefault(r.head.predicate, []).append(r)
    out = []
    for p, rs in by_pred.items():
        if len(rs) == 2 and all(len(r.body) == 1 and not r.body[0].negated for r in rs):
            h = rs[0].head
            q, r = rs[0].body[0].atom, rs[1].body[0].atom
            out += [
                VuRule(Delta("-", h), (Literal(q),), (Delta("-", q),), case="3"),
                VuRule(Delta("-", h), (Literal(r),), (Delta("-", r),), case="3"),
                VuRule(Delta("+", h), (), (Delta("+", q), Delta("+", r)), case="3"),
            ]
            continue
        if len(rs) != 1:
            raise NotNormalizableError(f"{p} is defined by {len(rs)} rules after normalization")
        rule = rs[0]
        h, body = rule.head, rule.body
        if len(body) == 2 and not body[1].negated:
            q, r = body[0].atom, body[1].atom
            out += [
                VuRule(Delta("+", h), (Literal(q, True),), (Delta("+", q),), case="1"),
                VuRule(Delta("+", h), (Literal(r, True),), (Delta("+", r),), case="1"),
                VuRule(Delta("-", h), (), (Delta("-", q), Delta("-", r)), case="1"),
            ]
        elif len(body) == 2:
            q, r = body[0].atom, body[1].atom
            out += [
                VuRule(Delta("+", h), (Literal(q, True),), (Delta("+", q),), case="2"),
                VuRule(Delta("+", h), (Literal(r),), (Delta("-", r),), case="2"),
                VuRule(Delta("-", h), (), (Delta("-", q), Delta("+", r)), case="2"),
            ]
        elif body[0].negated:
            q = body[0].atom
            out += [VuRule(Delta("+", h), (), (Delta("-", q),), case="4b"),
                    VuRule(Delta("-", h), (), (Delta("+", q),), case="4b")]
        else:
            q = body[0].atom
            extra = sorted(q.variables() - h.variables())
            if extra:
                y = extra[0]
                out += [VuRule(Delta("-", h), (Literal(q),), (Delta("-", q),), case="5"),
                        VuRule(Delta("+", h), (), (Delta("+", q),), project=y, case="5")]
            else:
                out += [VuRule(Delta("+", h), (), (Delta("+", q),), case="4a"),
                        VuRule(Delta("-", h), (), (Delta("-", q),), case="4a")]
    return out


def _match(pattern: Atom, ground_atom: Atom):
    if pattern.predicate != ground_atom.predicate:
        return None
    theta = {}
    for t, g in zip(pattern.args, ground_atom.args):
        if t.is_var:
            if theta.setdefault(t, g) != g:
                return None
        elif t != g:
            return None
    return theta


def seeds(request, mode: str) -> tuple:
    sign = "+" if mode == "insert" else "-"
    atoms = [request] if isinstance(request, Atom) else list(request)
    return tuple(Delta(sign, a) for a in atoms)


def magic_vu(ddb: KnowledgeBase, request, mode: str = "insert", normalized=None) -> VuRuleSet:
    """Seeds, VU rules and their ground instances reachable from the seeds.

    A ground disjunction already met by the current model (∇+A with A true,
    ∇−A with A false) is dropped; such a disjunct needs no change.
    """
    norm, aux = normalized or normalize(ddb)
    rules = vu_rules(norm)
    starts = seeds(request, mode)
    universe = herbrand_universe(ddb, [t.label for d in starts for t in d.atom.args])
    model = semi_naive_model(KnowledgeBase(norm.immutable, (), (), None), sorted_atoms(ddb.edb), universe)
    for d in starts:
        if (d.sign == "+") == (d.atom in model):
            raise NotTrueUpdateError(f"{'insert' if d.sign == '+' else 'delete'} {d.atom} is not a true update")
    by_trigger = {}
    for r in rules:
        by_trigger.setdefault((r.trigger.sign, r.trigger.atom.predicate), []).append(r)
    fresh = []
    relies = {}
    clauses, seen, queue = [], set(starts), list(starts)
    while queue:
        d = queue.pop(0)
        for rule in by_trigger.get((d.sign, d.atom.predicate), ()):
            theta = _match(rule.trigger.atom, d.atom)
            if theta is None:
                continue
            if d.sign == "+":
                for g in rule.guards:
                    a = g.atom.substitute(theta)
                    if g.negated and a.is_ground and a in model:
                        relies.setdefault(d, set()).add(a)
            for heads in _instances(rule, theta, model, universe, fresh):
                if any(h.sign == "+" and h.atom in model or h.sign == "-" and h.atom not in model for h in heads):
                    continue
                clauses.append(DClause(tuple(heads), (d,)))
                if len(clauses) > INSTANCE_CAP:
                    raise NotNormalizableError(f"more than {INSTANCE_CAP} VU rule instances")
                for h in heads:
                    if h not in seen:
                        seen.add(h)
                        queue.append(h)
    by_atom = {}
    for d in seen:
        by_atom.setdefault(d.atom, set()).add(d.sign)
    for a in sorted_atoms(by_atom):
        if by_atom[a] == {"+", "-"}:
            clauses.append(DClause((), (Delta("+", a), Delta("-", a))))
    return VuRuleSet(starts, tuple(rules), norm, aux, tuple(clauses), tuple(fresh),
                     {d: frozenset(v) for d, v in relies.items()})


def _instances(rule: VuRule, theta: dict, model, universe, fresh) -> list:
    guard_sets = [theta]
    for g in rule.guards:
        nxt = []
        for th in guard_sets:
            a = g.atom.substitute(th)
            if a.is_ground:
                if (a in model) != g.negated:
                    nxt.append(th)
                continue
            for m in model:
                t2 = _match(a, m)
                if t2 is not None:
                    nxt.append({**th, **t2})
        guard_sets = nxt
    out = []
    for th in sorted(guard_sets, key=lambda t: sorted((k.label, v.label) for k, v in t.items())):
        if rule.project is None:
            out.append([c.substitute(th) for c in rule.consequents])
            continue
        c = rule.consequents[0]
        label = f"{FRESH_PREFIX}{len(fresh) + 1}"
        fresh.append(label)
        consts = [const(x) for x in universe] + [const(label)]
        out.append([c.substitute({**th, rule.project: k}) for k in consts])
    return out


def is_fresh(a: Atom) -> bool:
    return any(t.label.startswith(FRESH_PREFIX) for t in a.args)
