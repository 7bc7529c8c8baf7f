"""Seeded random corpora: small Horn KBs, hierarchical definite DDBs, abductive frameworks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..core import HornClause, KnowledgeBase, Literal, atom, denial, fact
from .abductive import Framework, Not, Var, conj, disj, Implies

KB_ATOMS = ("a", "b", "c", "d", "e", "f", "p", "q", "r", "s")
BASE_ATOMS = ("a", "b", "c", "d", "e", "f")
VIEW_ATOMS = ("p", "q", "r", "s")


@dataclass(frozen=True)
class Instance:
    kb: KnowledgeBase
    alpha: HornClause
    label: str


def _rule(rng, head, candidates, neg_p):
    k = rng.randint(1, min(3, len(candidates)))
    body = rng.sample(candidates, k)
    lits = tuple(Literal(atom(b), rng.random() < neg_p) for b in body)
    if all(l.negated for l in lits):
        lits = (Literal(lits[0].atom),) + lits[1:]
    return HornClause(atom(head), lits)


def random_kb(rng: random.Random, max_facts=6, max_rules=6, max_ics=2, neg_p=0.15) -> KnowledgeBase:
    """Propositional KB; a rule body only uses atoms earlier in KB_ATOMS, so the KB is acyclic."""
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        h = rng.randint(1, len(KB_ATOMS) - 1)
        rules.append(_rule(rng, KB_ATOMS[h], list(KB_ATOMS[:h]), neg_p))
    rules = list(dict.fromkeys(rules))
    facts = [fact(atom(a)) for a in rng.sample(KB_ATOMS, rng.randint(0, max_facts))]
    ics = []
    for _ in range(rng.randint(0, max_ics)):
        body = rng.sample(KB_ATOMS, rng.randint(1, 2))
        ics.append(denial(*[Literal(atom(b)) for b in body]))
    return KnowledgeBase(tuple(rules), tuple(facts), tuple(dict.fromkeys(ics)))


def random_alpha(rng: random.Random) -> HornClause:
    if rng.random() < 0.5:
        return fact(atom(rng.choice(KB_ATOMS)))
    body = rng.sample(KB_ATOMS, rng.randint(1, 2))
    return denial(*[Literal(atom(b)) for b in body])


def kb_corpus(seed: int, count: int) -> list:
    rng = random.Random(seed)
    return [Instance(random_kb(rng), random_alpha(rng), f"kb{seed}-{i}") for i in range(count)]


def random_ddb(rng: random.Random, max_rules=5, ic_p=0.5) -> KnowledgeBase:
    """Hierarchical definite DDB: views over base atoms and lower views, EDB satisfying IC."""
    rules = []
    views = VIEW_ATOMS[: rng.randint(1, len(VIEW_ATOMS))]
    for i, v in enumerate(views):
        for _ in range(rng.randint(1, 2)):
            rules.append(_rule(rng, v, list(BASE_ATOMS) + list(views[:i]), 0.0))
        if len(rules) >= max_rules:
            break
    rules = list(dict.fromkeys(rules))
    defined = {r.head.predicate.name for r in rules}
    rules = [r for r in rules if all(l.atom.predicate.name in BASE_ATOMS or l.atom.predicate.name in defined
                                     for l in r.body)]
    ics = []
    if rng.random() < ic_p:
        body = rng.sample(BASE_ATOMS, rng.randint(1, 2))
        ics.append(denial(*[Literal(atom(b)) for b in body]))
    edb = set(rng.sample(BASE_ATOMS, rng.randint(0, 4)))
    for c in ics:
        names = [l.atom.predicate.name for l in c.body]
        if all(n in edb for n in names):
            edb.discard(names[0])
    return KnowledgeBase(tuple(rules), tuple(fact(atom(a)) for a in sorted(edb)), tuple(ics), ddb=True)


def ddb_corpus(seed: int, count: int) -> list:
    """(ddb, request atom, "insert" | "delete") triples; the mode makes the request a true update."""
    from ..semantics import least_herbrand_model

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ddb = random_ddb(rng)
        views = sorted({r.head.predicate.name for r in ddb.rules})
        goal = atom(rng.choice(views))
        mode = "delete" if goal in least_herbrand_model(ddb) else "insert"
        out.append((ddb, goal, mode))
    return out


# frameworks -------------------------------------------------------------------

AB_NAMES = "abcdefghij"
DERIVED_NAMES = "pqr"


def random_sentence(rng: random.Random, atoms, depth=2):
    if depth == 0 or rng.random() < 0.3:
        s = Var(rng.choice(atoms))
        return Not(s) if rng.random() < 0.4 else s
    op = rng.choice(("and", "or", "not", "imp"))
    if op == "not":
        return Not(random_sentence(rng, atoms, depth - 1))
    if op == "imp":
        return Implies(random_sentence(rng, atoms, depth - 1), random_sentence(rng, atoms, depth - 1))
    parts = [random_sentence(rng, atoms, depth - 1) for _ in range(2)]
    return conj(*parts) if op == "and" else disj(*parts)


def random_framework(rng: random.Random, n_ab: int, n_derived: int = 2, neg_p=0.3, tries=50) -> Framework:
    """Acyclic program over n_ab abducibles with a consistent current knowledge."""
    ab = [atom(AB_NAMES[i]) for i in range(n_ab)]
    derived = [atom(DERIVED_NAMES[i]) for i in range(n_derived)]
    program = []
    for i, d in enumerate(derived):
        pool = ab + derived[:i]
        for _ in range(rng.randint(1, 2)):
            k = rng.randint(1, min(2, len(pool)))
            body = tuple(Literal(a, rng.random() < neg_p) for a in rng.sample(pool, k))
            program.append(HornClause(d, body))
    everything = ab + derived
    for _ in range(tries):
        ic = tuple(Not(conj(*[Var(a) for a in rng.sample(everything, rng.randint(1, 2))]))
                   for _ in range(rng.randint(0, 1)))
        k = tuple(random_sentence(rng, ab, 1) for _ in range(rng.randint(1, 2)))
        fw = Framework(tuple(dict.fromkeys(program)), tuple(ab), ic, k)
        if fw.kb_bits:
            return fw
    return Framework(tuple(dict.fromkeys(program)), tuple(ab), (), ())


def framework_atoms(fw: Framework) -> list:
    return fw.atoms()
