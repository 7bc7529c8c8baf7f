"""Model-enumeration oracle for the abductive framework <P, Ab, IC, K>.

An interpretation is a subset of Ab, encoded as a bitmask over the
abducibles in canonical order. A set of interpretations is a Python int
whose bit m is set when interpretation m belongs to it, so sentence
connectives become bitwise operations on truth-table columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

from ..core import Atom, HkbError, HornClause, KnowledgeBase, Literal, sorted_atoms
from ..grounding import ground
from .postulates import Verdict

AB_BOUND = 16


class FrameworkError(HkbError):
    pass


class AbducibleBoundError(FrameworkError):
    pass


class NotAcyclicError(FrameworkError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("program is not acyclic: " + " -> ".join(str(a) for a in self.cycle))


# sentences --------------------------------------------------------------------


class Sentence:
    def bits(self, fw: "Framework") -> int:
        raise NotImplementedError

    def eval(self, true_atoms) -> bool:
        raise NotImplementedError

    def atoms(self) -> set:
        raise NotImplementedError


@dataclass(frozen=True)
class Top(Sentence):
    def bits(self, fw):
        return fw.full

    def eval(self, true_atoms):
        return True

    def atoms(self):
        return set()

    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Bottom(Sentence):
    def bits(self, fw):
        return 0

    def eval(self, true_atoms):
        return False

    def atoms(self):
        return set()

    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Var(Sentence):
    atom: Atom

    def bits(self, fw):
        return fw.column(self.atom)

    def eval(self, true_atoms):
        return self.atom in true_atoms

    def atoms(self):
        return {self.atom}

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Not(Sentence):
    arg: Sentence

    def bits(self, fw):
        return fw.full ^ self.arg.bits(fw)

    def eval(self, true_atoms):
        return not self.arg.eval(true_atoms)

    def atoms(self):
        return self.arg.atoms()

    def __str__(self):
        return f"~{self.arg}"


@dataclass(frozen=True)
class And(Sentence):
    args: tuple

    def bits(self, fw):
        out = fw.full
        for a in self.args:
            out &= a.bits(fw)
        return out

    def eval(self, true_atoms):
        return all(a.eval(true_atoms) for a in self.args)

    def atoms(self):
        return set().union(*[a.atoms() for a in self.args])

    def __str__(self):
        return "(" + " & ".join(str(a) for a in self.args) + ")" if self.args else "true"


@dataclass(frozen=True)
class Or(Sentence):
    args: tuple

    def bits(self, fw):
        out = 0
        for a in self.args:
            out |= a.bits(fw)
        return out

    def eval(self, true_atoms):
        return any(a.eval(true_atoms) for a in self.args)

    def atoms(self):
        return set().union(*[a.atoms() for a in self.args])

    def __str__(self):
        return "(" + " | ".join(str(a) for a in self.args) + ")" if self.args else "false"


@dataclass(frozen=True)
class Implies(Sentence):
    left: Sentence
    right: Sentence

    def bits(self, fw):
        return (fw.full ^ self.left.bits(fw)) | self.right.bits(fw)

    def eval(self, true_atoms):
        return (not self.left.eval(true_atoms)) or self.right.eval(true_atoms)

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"({self.left} -> {self.right})"


def conj(*args) -> Sentence:
    return And(tuple(args))


def disj(*args) -> Sentence:
    return Or(tuple(args))


def lit_sentence(lit: Literal) -> Sentence:
    return Not(Var(lit.atom)) if lit.negated else Var(lit.atom)


def clause_sentence(c: HornClause) -> Sentence:
    body = conj(*[lit_sentence(l) for l in c.body]) if c.body else Top()
    if c.kind == "constraint":
        return Not(body)
    if c.kind == "fact":
        return Var(c.head)
    return Implies(body, Var(c.head))


# framework ------------------------------------------------------------------


@dataclass(frozen=True)
class AbductiveInterpretation:
    truths: frozenset = frozenset()

    def __str__(self):
        return "{" + ", ".join(str(a) for a in sorted_atoms(self.truths)) + "}"


@dataclass(frozen=True)
class Framework:
    """<P, Ab, IC, K>: ground acyclic program, abducibles, constraints, current knowledge."""

    program: tuple = ()
    abducibles: tuple = ()
    ic: tuple = ()
    knowledge: tuple = ()

    def __post_init__(self):
        if len(self.abducibles) > AB_BOUND:
            raise AbducibleBoundError(f"{len(self.abducibles)} abducibles (> {AB_BOUND})")
        ab = set(self.abducibles)
        for c in self.program:
            if c.kind == "constraint" or not c.is_ground:
                raise FrameworkError(f"program clause {c} must be a ground rule or fact")
            if c.head in ab:
                raise FrameworkError(f"abducible {c.head} is defined by {c}; abducibles must sit at level 0")
        for s in self.knowledge:
            extra = s.atoms() - ab
            if extra:
                raise FrameworkError(f"knowledge mentions the non-abducible {sorted_atoms(extra)[0]}")
        self.levels  # acyclicity check

    @classmethod
    def from_kb(cls, kb: KnowledgeBase, knowledge: Optional[Iterable[Sentence]] = None) -> "Framework":
        """P = KB_I grounded, Ab = abducible atoms occurring in kb, IC = KB_IC, K = KB_U (default)."""
        g = ground(kb)
        preds = kb.abducibles
        occurring = {a for c in g.all_clauses() for a in c.atoms() if not a.is_builtin}
        ab = tuple(sorted_atoms(a for a in occurring if a.predicate in preds))
        abset = set(ab)
        program = tuple(c for c in g.immutable if c.head not in abset)
        ic = tuple(clause_sentence(c) for c in g.constraints)
        k = tuple(knowledge) if knowledge is not None else tuple(Var(a) for a in sorted_atoms(kb.edb))
        return cls(program, ab, ic, k)

    def replace(self, ic=None, knowledge=None) -> "Framework":
        return Framework(self.program, self.abducibles,
                         self.ic if ic is None else tuple(ic),
                         self.knowledge if knowledge is None else tuple(knowledge))

    @property
    def size(self) -> int:
        return 1 << len(self.abducibles)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def levels(self) -> dict:
        """Level mapping: abducibles 0, every other atom one above its highest body atom."""
        by_head = {}
        for c in self.program:
            by_head.setdefault(c.head, []).append(c)
        level = {a: 0 for a in self.abducibles}
        state = {}

        def visit(a, path):
            if a in level:
                return level[a]
            if state.get(a) == "open":
                raise NotAcyclicError(path[path.index(a):] + [a])
            state[a] = "open"
            lv = 1
            for c in by_head.get(a, ()):
                for l in c.body:
                    if not l.atom.is_builtin:
                        lv = max(lv, visit(l.atom, path + [a]) + 1)
            state[a] = "done"
            level[a] = lv
            return lv

        for c in self.program:
            visit(c.head, [])
            for l in c.body:
                visit(l.atom, [])
        return level

    @cached_property
    def _columns(self) -> dict:
        n = len(self.abducibles)
        cols = {}
        for i, a in enumerate(self.abducibles):
            half = 1 << i
            unit = ((1 << half) - 1) << half
            period = half << 1
            cols[a] = unit * (self.full // ((1 << period) - 1))
        by_head = {}
        for c in self.program:
            by_head.setdefault(c.head, []).append(c)
        for a in sorted(by_head, key=lambda x: (self.levels[x], x.sort_key())):
            out = 0
            for c in by_head[a]:
                b = self.full
                for l in c.body:
                    col = cols.get(l.atom, 0)
                    b &= (self.full ^ col) if l.negated else col
                out |= b
            cols[a] = out
        return cols

    def column(self, a: Atom) -> int:
        """Interpretations in which a is true, by the level-wise definition."""
        return self._columns.get(a, 0)

    def atoms(self) -> list:
        return sorted_atoms(self._columns)

    def interpretation(self, mask: int) -> AbductiveInterpretation:
        return AbductiveInterpretation(frozenset(a for i, a in enumerate(self.abducibles) if mask >> i & 1))

    def mask(self, interp: AbductiveInterpretation) -> int:
        return sum(1 << i for i, a in enumerate(self.abducibles) if a in interp.truths)

    def true_atoms(self, mask: int) -> frozenset:
        return frozenset(a for a, col in self._columns.items() if col >> mask & 1)

    def mod(self, sentences: Iterable[Sentence]) -> int:
        out = self.full
        for s in sentences:
            out &= s.bits(self)
        return out

    @cached_property
    def s_bits(self) -> int:
        """S = Mod(IC)."""
        return self.mod(self.ic)

    @cached_property
    def kb_bits(self) -> int:
        """Mod(KB) = Mod(K ∪ IC)."""
        return self.mod(self.knowledge) & self.s_bits

    def models(self, bits: int) -> "ModelSet":
        return ModelSet(self, bits)

    def cube(self, care: int, val: int) -> Sentence:
        lits = []
        for i, a in enumerate(self.abducibles):
            if care >> i & 1:
                lits.append(Var(a) if val >> i & 1 else Not(Var(a)))
        return conj(*lits)

    def characteristic(self, bits: int) -> Sentence:
        """A sentence over Ab whose models are exactly `bits`."""
        care = (1 << len(self.abducibles)) - 1
        return disj(*[self.cube(care, m) for m in masks_of(bits)])


def masks_of(bits: int) -> list:
    out, m = [], 0
    while bits:
        if bits & 1:
            out.append(m)
        bits >>= 1
        m += 1
    return out


@dataclass(frozen=True)
class ModelSet:
    fw: Framework
    bits: int

    def __iter__(self):
        return (self.fw.interpretation(m) for m in masks_of(self.bits))

    def __len__(self):
        return bin(self.bits).count("1")

    def __bool__(self):
        return bool(self.bits)

    def __contains__(self, interp):
        return bool(self.bits >> self.fw.mask(interp) & 1)

    def __le__(self, other):
        return self.bits & ~other.bits == 0

    def __and__(self, other):
        return ModelSet(self.fw, self.bits & other.bits)

    def __or__(self, other):
        return ModelSet(self.fw, self.bits | other.bits)

    def __eq__(self, other):
        return isinstance(other, ModelSet) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __str__(self):
        return "{" + ", ".join(str(i) for i in self) + "}"


# consequence ------------------------------------------------------------------


def _check_bound(fw: Framework):
    if len(fw.abducibles) > AB_BOUND:
        raise AbducibleBoundError(f"{len(fw.abducibles)} abducibles (> {AB_BOUND})")


def cnp_consequence(fw: Framework, sentence: Sentence, knowledge=None, with_ic: bool = True) -> bool:
    """K ⊨_P sentence: true in every abductive model of K (and IC unless with_ic is False)."""
    _check_bound(fw)
    k = fw.knowledge if knowledge is None else tuple(knowledge)
    models = fw.mod(k) & (fw.s_bits if with_ic else fw.full)
    return models & ~sentence.bits(fw) & fw.full == 0


def cn_within(fw: Framework, knowledge, pool) -> frozenset:
    """Cn_P(K) restricted to a finite sentence pool, without IC."""
    models = fw.mod(knowledge)
    return frozenset(s for s in pool if models & ~s.bits(fw) & fw.full == 0)


def p_consistent(fw: Framework, knowledge=None) -> bool:
    k = fw.knowledge if knowledge is None else tuple(knowledge)
    return bool(fw.mod(k) & fw.s_bits)


def accepted(fw: Framework, sentence: Sentence) -> bool:
    return cnp_consequence(fw, sentence)


def expansion(fw: Framework, alpha: Sentence) -> ModelSet:
    """Mod(KB + α) = Mod(KB) ∩ Mod(α)."""
    return fw.models(fw.kb_bits & alpha.bits(fw))


def classical_consequence(knowledge, sentence: Sentence, bound: int = 14) -> bool:
    """Propositional entailment with every atom free."""
    atoms = sorted_atoms(set().union(sentence.atoms(), *[k.atoms() for k in knowledge]))
    if len(atoms) > bound:
        raise AbducibleBoundError(f"{len(atoms)} atoms (> {bound}) for classical enumeration")
    for r in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            t = set(combo)
            if all(k.eval(t) for k in knowledge) and not sentence.eval(t):
                return False
    return True


def cn_properties(fw: Framework, knowledge, extra, pool) -> list:
    """Inclusion, iteration, monotony, deduction, compactness and superclassicality on a pool."""
    knowledge = tuple(knowledge)
    pool = tuple(dict.fromkeys(tuple(pool) + knowledge))
    cn = cn_within(fw, knowledge, pool)
    out = []
    missing = [k for k in knowledge if k not in cn]
    out.append(Verdict("inclusion", not missing, str(missing[0]) if missing else None))
    again = cn_within(fw, tuple(cn), pool)
    out.append(Verdict("iteration", again == cn, None if again == cn else "Cn(Cn(K)) differs from Cn(K)"))
    bigger = cn_within(fw, knowledge + tuple(extra), pool)
    lost = [s for s in cn if s not in bigger]
    out.append(Verdict("monotony", not lost, str(lost[0]) if lost else None))
    bad = None
    for a in pool:
        with_a = cn_within(fw, knowledge + (a,), pool)
        for b in with_a:
            if Implies(a, b) not in cn_within(fw, knowledge, (Implies(a, b),)):
                bad = f"{b} from K+{a} but not {a} -> {b} from K"
                break
        if bad:
            break
    out.append(Verdict("deduction", bad is None, bad))
    bad = None
    for s in cn:
        if not any(s in cn_within(fw, sub, (s,)) for r in range(len(knowledge) + 1)
                   for sub in itertools.combinations(knowledge, r)):
            bad = str(s)
            break
    out.append(Verdict("compactness", bad is None, bad))
    bad = None
    for s in pool:
        try:
            classical = classical_consequence(knowledge, s)
        except AbducibleBoundError:
            continue
        if classical and s not in cn:
            bad = str(s)
            break
    out.append(Verdict("superclassicality", bad is None, bad))
    return out


# orders -------------------------------------------------------------------


class FaithfulOrder:
    """A pre-order over S = Mod(IC), given by a rank table or a leq relation."""

    def __init__(self, base: Framework, rank: Optional[dict] = None, leq: Optional[Callable] = None):
        if (rank is None) == (leq is None):
            raise ValueError("give exactly one of rank or leq")
        self.base = base
        self.rank = rank
        self._leq = leq
        self._domain = masks_of(base.s_bits)
        if rank is not None:
            tiers = {}
            for m in self._domain:
                tiers.setdefault(rank[m], 0)
                tiers[rank[m]] |= 1 << m
            self._tiers = [tiers[r] for r in sorted(tiers)]

    def leq(self, i: int, j: int) -> bool:
        if self.rank is not None:
            return self.rank[i] <= self.rank[j]
        return self._leq(i, j)

    def minimal(self, bits: int) -> int:
        """Min(F, ≤) for F ⊆ S given as a bitset."""
        bits &= self.base.s_bits
        if self.rank is not None:
            for tier in self._tiers:
                if bits & tier:
                    return bits & tier
            return 0
        ms = masks_of(bits)
        out = 0
        for i in ms:
            if not any(self.leq(j, i) and not self.leq(i, j) for j in ms):
                out |= 1 << i
        return out

    def table(self) -> frozenset:
        return frozenset((i, j) for i in self._domain for j in self._domain if self.leq(i, j))


def dalal_order(fw: Framework) -> FaithfulOrder:
    """Rank by least Hamming distance to a model of KB; flat when KB has no model."""
    kb = masks_of(fw.kb_bits)
    rank = {}
    for m in masks_of(fw.s_bits):
        rank[m] = min((bin(m ^ k).count("1") for k in kb), default=0)
    return FaithfulOrder(fw, rank=rank)


def random_faithful_order(fw: Framework, rng, levels: int = 3) -> FaithfulOrder:
    rank = {}
    for m in masks_of(fw.s_bits):
        rank[m] = 0 if fw.kb_bits >> m & 1 else rng.randint(1, levels)
    return FaithfulOrder(fw, rank=rank)


def equivalent_variant(fw: Framework) -> Framework:
    """Same logical system, K replaced by one sentence with the same models."""
    return fw.replace(knowledge=(fw.characteristic(fw.mod(fw.knowledge)),))


def pair_sentence(fw: Framework, i: int, j: int) -> Sentence:
    return fw.characteristic((1 << i) | (1 << j))


def induced_order(fw: Framework, op: Callable) -> FaithfulOrder:
    """I ≤ J iff I is among the revision results for the sentence with models {I, J}."""
    cache = {}

    def leq(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = op(fw, pair_sentence(fw, i, j)).bits
        return bool(cache[key] >> i & 1)

    return FaithfulOrder(fw, leq=leq)


def validate_order(order: FaithfulOrder, factory: Optional[Callable] = None, subset_bound: int = 12) -> list:
    """Verdicts for the order axioms; preservance needs a factory fw -> order."""
    fw = order.base
    dom = masks_of(fw.s_bits)
    out = []
    bad = next((f"{i} not <= {i}" for i in dom if not order.leq(i, i)), None)
    if bad is None:
        for i, j, k in itertools.product(dom, repeat=3):
            if order.leq(i, j) and order.leq(j, k) and not order.leq(i, k):
                bad = f"{i} <= {j} <= {k} but not {i} <= {k}"
                break
    out.append(Verdict("<=1", bad is None, bad))
    bad = next((f"{i} and {j} incomparable" for i, j in itertools.combinations(dom, 2)
                if not order.leq(i, j) and not order.leq(j, i)), None)
    out.append(Verdict("<=2", bad is None, bad))
    out.append(Verdict("<=3", order.minimal(fw.s_bits) == fw.kb_bits,
                       None if order.minimal(fw.s_bits) == fw.kb_bits else "Min(S) differs from Mod(KB)"))
    bad = None
    if len(dom) <= subset_bound:
        subsets = (c for r in range(1, len(dom) + 1) for c in itertools.combinations(dom, r))
        note = ""
    else:
        subsets = (c for r in (1, 2, 3) for c in itertools.combinations(dom, r))
        note = "subsets of size <= 3"
    for c in subsets:
        if not order.minimal(sum(1 << m for m in c)):
            bad = f"Min({list(c)}) is empty"
            break
    out.append(Verdict("<=4", bad is None, bad, note))
    if factory is not None:
        other = factory(equivalent_variant(fw))
        same = other.table() == order.table()
        out.append(Verdict("<=5", same, None if same else "equivalent KB induces a different order"))
    return out


# revision and contraction -----------------------------------------------------


def model_revision(fw: Framework, alpha: Sentence, order: Optional[FaithfulOrder] = None) -> ModelSet:
    """Min(Mod({α} ∪ IC), ≤_KB)."""
    _check_bound(fw)
    order = order or dalal_order(fw)
    return fw.models(order.minimal(alpha.bits(fw) & fw.s_bits))


def model_contraction(fw: Framework, alpha: Sentence, order: Optional[FaithfulOrder] = None) -> ModelSet:
    """Mod(KB) ∪ Min(Mod({¬α} ∪ IC), ≤_KB)."""
    _check_bound(fw)
    order = order or dalal_order(fw)
    return fw.models(fw.kb_bits | order.minimal(Not(alpha).bits(fw) & fw.s_bits))


def dalal_revision(fw, alpha):
    return model_revision(fw, alpha, dalal_order(fw))


def dalal_contraction(fw, alpha):
    return model_contraction(fw, alpha, dalal_order(fw))


def order_revision(order_factory: Callable) -> Callable:
    return lambda fw, alpha: model_revision(fw, alpha, order_factory(fw))


def order_contraction(order_factory: Callable) -> Callable:
    return lambda fw, alpha: model_contraction(fw, alpha, order_factory(fw))


def levi(contract: Callable) -> Callable:
    """Revision from contraction: Mod(KB ∸ ¬α) ∩ Mod(α)."""
    return lambda fw, alpha: contract(fw, Not(alpha)) & fw.models(alpha.bits(fw))


def harper(revise: Callable) -> Callable:
    """Contraction from revision: Mod(KB) ∪ Mod(KB ∔ ¬α)."""
    return lambda fw, alpha: fw.models(fw.kb_bits) | revise(fw, Not(alpha))


def _v(name, ok, witness):
    return Verdict(name, bool(ok), None if ok else witness)


def revision_postulates(fw: Framework, revise: Callable, alpha: Sentence, beta: Sentence) -> list:
    """∔1 to ∔7 for one (α, β) pair; ∔5 uses an equivalent KB and a rewritten α."""
    r = revise(fw, alpha).bits
    a, b = alpha.bits(fw), beta.bits(fw)
    ab = revise(fw, conj(alpha, beta)).bits
    kb = fw.kb_bits
    out = [
        _v("+1", r & ~fw.s_bits & fw.full == 0, "a result model violates IC"),
        _v("+2", r & ~a & fw.full == 0, f"{alpha} not accepted"),
        _v("+3", bool(a & fw.s_bits) == bool(r), "satisfiability of alpha and IC does not match the result"),
    ]
    ok4 = not (kb & a) or r == kb & a
    out.append(_v("+4", ok4, "result differs from Mod(KB) ∩ Mod(alpha)"))
    alt = revise(equivalent_variant(fw), Not(Not(alpha))).bits
    out.append(_v("+5", alt == r, "equivalent inputs give different results"))
    out.append(_v("+6", (r & b) & ~ab & fw.full == 0, f"(KB*{alpha})+{beta} not within KB*({alpha} & {beta})"))
    ok7 = not (r & b) or ab & ~(r & b) & fw.full == 0
    out.append(_v("+7", ok7, f"KB*({alpha} & {beta}) not within (KB*{alpha})+{beta}"))
    return out


def contraction_postulates(fw: Framework, contract: Callable, alpha: Sentence, beta: Sentence) -> list:
    """∸1 to ∸8 for one (α, β) pair; success reads "not accepted" relative to IC."""
    c = contract(fw, alpha).bits
    a = alpha.bits(fw)
    cab = contract(fw, conj(alpha, beta)).bits
    cb = contract(fw, beta).bits
    kb, full = fw.kb_bits, fw.full
    out = [_v("-1", c & ~fw.s_bits & full == 0, "a result model violates IC")]
    ok2 = fw.s_bits & ~a & full == 0 or c & ~a & full != 0
    out.append(_v("-2", ok2, f"{alpha} still accepted"))
    out.append(_v("-3", kb & ~c & full == 0, "Mod(KB) not within the result"))
    ok4 = kb & ~a & full == 0 or c == kb
    out.append(_v("-4", ok4, "result differs from Mod(KB) although alpha is not accepted"))
    out.append(_v("-5", (c & a) & ~kb & full == 0, "recovery fails"))
    alt = contract(equivalent_variant(fw), Not(Not(alpha))).bits
    out.append(_v("-6", alt == c, "equivalent inputs give different results"))
    out.append(_v("-7", cab & ~(c | cb) & full == 0, f"KB-({alpha} & {beta}) not within the union"))
    ok8 = cab & ~a & full == 0 or c & ~cab & full == 0
    out.append(_v("-8", ok8, f"KB-{alpha} not within KB-({alpha} & {beta})"))
    return out


def levi_round_trip(fw: Framework, alpha: Sentence, order: Optional[FaithfulOrder] = None) -> bool:
    order = order or dalal_order(fw)
    rev = model_revision(fw, alpha, order)
    via = levi(lambda f, s: model_contraction(f, s, order))(fw, alpha)
    return rev == via


def harper_round_trip(fw: Framework, alpha: Sentence, order: Optional[FaithfulOrder] = None) -> bool:
    order = order or dalal_order(fw)
    con = model_contraction(fw, alpha, order)
    via = harper(lambda f, s: model_revision(f, s, order))(fw, alpha)
    return con == via


# explanations -------------------------------------------------------------


def _cube_bits(fw: Framework, care: int, val: int) -> int:
    out = fw.full
    for i, a in enumerate(fw.abducibles):
        if care >> i & 1:
            col = fw.column(a)
            out &= col if val >> i & 1 else fw.full ^ col
    return out


def _cube_literals(fw: Framework, care: int, val: int) -> frozenset:
    return frozenset(Literal(a, not (val >> i & 1)) for i, a in enumerate(fw.abducibles) if care >> i & 1)


def _literal_sort(lits) -> tuple:
    return (len(lits), sorted((l.atom.sort_key(), l.negated) for l in lits))


def prime_implicants(fw: Framework, bits: int) -> list:
    """Prime implicants of a model set over Ab by iterated merging of minterms."""
    n = len(fw.abducibles)
    care_all = (1 << n) - 1
    current = {(care_all, m) for m in masks_of(bits)}
    primes = set()
    while current:
        merged, nxt = set(), set()
        for care, val in current:
            for i in range(n):
                bit = 1 << i
                if care & bit and (care, val ^ bit) in current:
                    merged.add((care, val))
                    nxt.add((care & ~bit, val & ~bit))
        primes |= current - merged
        current = nxt
    return sorted(primes)


def minimal_explanations(fw: Framework, alpha: Sentence) -> list:
    """Minimal sets Δ of abductive literals with Δ ⊨_P α and Δ consistent with IC."""
    _check_bound(fw)
    out = []
    for care, val in prime_implicants(fw, alpha.bits(fw)):
        if _cube_bits(fw, care, val) & fw.s_bits:
            out.append(_cube_literals(fw, care, val))
    return sorted(out, key=_literal_sort)


def brute_minimal_explanations(fw: Framework, alpha: Sentence, bound: int = 8) -> list:
    """Oracle: enumerate literal sets by size, keep entailing, IC-consistent, minimal ones."""
    n = len(fw.abducibles)
    if n > bound:
        raise AbducibleBoundError(f"{n} abducibles (> {bound}) for literal-set enumeration")
    a = alpha.bits(fw)
    found = []
    for k in range(n + 1):
        for idx in itertools.combinations(range(n), k):
            care = sum(1 << i for i in idx)
            for signs in itertools.product((0, 1), repeat=k):
                val = sum(1 << i for i, s in zip(idx, signs) if s)
                if any(fc & care == fc and val & fc == fv for fc, fv in found):
                    continue
                cube = _cube_bits(fw, care, val)
                if cube & ~a & fw.full == 0 and cube & fw.s_bits:
                    found.append((care, val))
    return sorted((_cube_literals(fw, c, v) for c, v in found), key=_literal_sort)


def _as_sentence(x) -> Sentence:
    if isinstance(x, Literal):
        return lit_sentence(x)
    if isinstance(x, Atom):
        return Var(x)
    return x


def explanation_disjunction(d1, d2) -> tuple:
    """(Δ1 ∩ Δ2) ∪ {a ∨ b | a ∈ Δ1∖Δ2, b ∈ Δ2∖Δ1}."""
    s1, s2 = {_as_sentence(x) for x in d1}, {_as_sentence(x) for x in d2}
    common = sorted(s1 & s2, key=str)
    pairs = [disj(a, b) for a in sorted(s1 - s2, key=str) for b in sorted(s2 - s1, key=str)]
    return tuple(common + pairs)


def _clauses(d) -> frozenset:
    return frozenset(frozenset([lit]) for lit in d)


def _clause_disjunction(c1: frozenset, c2: frozenset) -> frozenset:
    out = set(c1 & c2)
    for x in c1 - c2:
        for y in c2 - c1:
            z = x | y
            if not any(Literal(l.atom, not l.negated) in z for l in z):
                out.add(z)
    return frozenset(c for c in out if not any(o < c for o in out))


def _clause_bits(fw: Framework, clauses) -> int:
    out = fw.full
    for c in clauses:
        b = 0
        for l in c:
            b |= lit_sentence(l).bits(fw)
        out &= b
    return out


def disjunction_models(fw: Framework, explanations) -> ModelSet:
    """Mod(∨Δ• ∪ IC), folding the disjunction as a subsumption-reduced clause set."""
    explanations = list(explanations)
    if not explanations:
        return fw.models(0)
    acc = _clauses(explanations[0])
    for d in explanations[1:]:
        acc = _clause_disjunction(acc, _clauses(d))
    return fw.models(_clause_bits(fw, acc) & fw.s_bits)
