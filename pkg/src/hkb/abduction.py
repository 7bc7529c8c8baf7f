"""SLD trees and abductive explanations (insertion and deletion)."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import Atom, HkbError, HornClause, KnowledgeBase, Literal, sorted_atoms
from .grounding import ground
from .semantics import check_known, satisfies_constraints, semi_naive_model
from .grounding import herbrand_universe

DEFAULT_DEPTH = 64
BRANCH_CAP = 256


class NoExplanationError(HkbError):
    """The goal cannot be made to hold (or fail) by changing abducible facts only."""


class DepthCutWarning(UserWarning):
    pass


# trees ---------------------------------------------------------------------


@dataclass(frozen=True)
class SldNode:
    goal: tuple
    via: Optional[str] = None
    children: tuple = ()
    status: Optional[str] = None

    def render(self, indent: int = 0) -> list:
        goal = "<- " + ", ".join(str(l) for l in self.goal) if self.goal else "[]"
        tag = f"  [{self.status}]" if self.status else ""
        via = f"  via {self.via}" if self.via else ""
        lines = ["  " * indent + goal + via + tag]
        for c in self.children:
            lines += c.render(indent + 1)
        return lines


@dataclass(frozen=True)
class SldBranch:
    index: int
    status: str  # success | failure | depth-cut
    rules: tuple = ()
    facts: tuple = ()  # updatable facts used as input clauses
    fixed_facts: tuple = ()  # immutable facts used as input clauses
    assumed: tuple = ()
    negatives: tuple = ()
    reason: str = ""
    leaf: tuple = ()

    @property
    def support(self) -> frozenset:
        return frozenset(self.facts) | frozenset(self.assumed)

    @property
    def clauses(self) -> frozenset:
        return frozenset(self.rules) | frozenset(HornClause(a) for a in self.facts + self.fixed_facts)


@dataclass(frozen=True)
class SldTree:
    root: tuple
    node: SldNode
    branches: tuple
    depth_cut: bool = False

    def success(self) -> list:
        return [b for b in self.branches if b.status == "success"]

    def actual_success(self, model) -> list:
        """Success branches that are refutations in the current KB (no assumptions, negations true)."""
        return [b for b in self.success() if not b.assumed and not any(n in model for n in b.negatives)]

    def atoms(self) -> set:
        out = set()
        stack = [self.node]
        while stack:
            n = stack.pop()
            out |= {l.atom for l in n.goal}
            stack.extend(n.children)
        return out

    def render(self) -> str:
        return "\n".join(self.node.render())


_ground_cache = {}


def ground_program(kb: KnowledgeBase, extra_constants=()) -> KnowledgeBase:
    key = (kb.immutable, kb.constraints, tuple(kb.constants()), tuple(sorted(set(extra_constants))))
    got = _ground_cache.get(key)
    if got is None:
        if len(_ground_cache) > 512:
            _ground_cache.clear()
        got = ground(KnowledgeBase(kb.immutable, (), kb.constraints, kb.declared_abducibles or kb.abducibles),
                     tuple(extra_constants) + tuple(kb.constants()))
        _ground_cache[key] = got
    return got


def _goal_literals(goal) -> tuple:
    if isinstance(goal, Atom):
        return (Literal(goal),)
    if isinstance(goal, Literal):
        return (goal,)
    return tuple(goal)


def _constants_of(lits) -> list:
    return [t.label for l in lits for t in l.atom.args]


class _Builder:
    def __init__(self, kb, depth_limit, abduce, ic_check, extra_facts=(), abducibles=None, consts=()):
        self.kb = kb
        self.g = ground_program(kb, consts)
        self.by_head = {}
        for r in self.g.rules:
            self.by_head.setdefault(r.head, []).append(r)
        self.edb = kb.edb
        self.fixed = kb.immutable_facts | frozenset(extra_facts)
        self.abducibles = abducibles if abducibles is not None else kb.abducibles
        # without a declaration, a predicate the KB never mentions is base too
        self.open_world = abducibles is None and kb.declared_abducibles is None
        self.defined = kb.view_predicates()
        self.depth_limit = depth_limit
        self.abduce = abduce
        self.ic_check = ic_check
        self.branches = []
        self.depth_cut = False
        self.rule_only = KnowledgeBase(kb.immutable, (), kb.constraints, kb.declared_abducibles)
        self._ic_cache = {}

    def is_abducible(self, a) -> bool:
        if a.predicate in self.abducibles:
            return True
        return self.open_world and a.predicate not in self.defined and not a.is_builtin

    def support_consistent(self, atoms) -> bool:
        key = frozenset(atoms)
        got = self._ic_cache.get(key)
        if got is None:
            model = semi_naive_model(self.rule_only, sorted_atoms(key | self.fixed))
            got = satisfies_constraints(self.rule_only, model)
            self._ic_cache[key] = got
        return got

    def leaf(self, items, status, st, reason=""):
        b = SldBranch(
            len(self.branches), status, tuple(st["rules"]), tuple(st["facts"]), tuple(st["fixed"]),
            tuple(st["assumed"]), tuple(st["neg"]), reason, tuple(l for l, _ in items),
        )
        self.branches.append(b)
        return status

    def expand(self, items, st, depth, via=None) -> SldNode:
        goal = tuple(l for l, _ in items)
        if not items:
            self.leaf(items, "success", st)
            return SldNode(goal, via, (), "success")
        if depth >= self.depth_limit:
            self.depth_cut = True
            self.leaf(items, "depth-cut", st, "depth")
            return SldNode(goal, via, (), "depth-cut")
        (lit, anc), rest = items[0], items[1:]
        a = lit.atom
        if lit.negated:
            st2 = dict(st, neg=st["neg"] + [a])
            child = self.expand(rest, st2, depth + 1, f"not {a}")
            return SldNode(goal, via, (child,))
        if a in anc:
            self.leaf(items, "failure", st, "loop")
            return SldNode(goal, via, (), "failure")
        children = []
        if a in self.edb:
            st2 = dict(st, facts=st["facts"] + [a])
            children.append(self._step(rest, st2, depth, str(a)))
        elif a in self.fixed:
            st2 = dict(st, fixed=st["fixed"] + [a])
            children.append(self.expand(rest, st2, depth + 1, str(a)))
        for r in self.by_head.get(a, ()):
            body = tuple((l, anc | {a}) for l in r.body)
            st2 = dict(st, rules=st["rules"] + [r])
            children.append(self.expand(body + rest, st2, depth + 1, str(r)))
        if self.abduce and self.is_abducible(a) and a not in self.edb and a not in self.fixed:
            st2 = dict(st, assumed=st["assumed"] + [a])
            children.append(self._step(rest, st2, depth, f"assume {a}"))
        if not children:
            self.leaf(items, "failure", st, "no-clause")
            return SldNode(goal, via, (), "failure")
        return SldNode(goal, via, tuple(children))

    def _step(self, rest, st, depth, via):
        if self.ic_check and not self.support_consistent(st["facts"] + st["assumed"]):
            self.leaf(rest, "failure", st, "ic")
            return SldNode(tuple(l for l, _ in rest), via, (), "failure")
        return self.expand(rest, st, depth + 1, via)


def build_sld_tree(
    kb: KnowledgeBase,
    goal,
    depth_limit: int = DEFAULT_DEPTH,
    abduce: bool = True,
    ic_check: bool = False,
    extra_facts: Iterable[Atom] = (),
    abducibles=None,
) -> SldTree:
    """Complete SLD tree for <- goal: leftmost selection, clauses in file order.

    Abducible leaves resolve against a stored fact or, with abduce=True, are
    assumed. Negated subgoals are recorded and evaluated later against a model.
    With ic_check=True branches whose support violates a constraint are closed
    during construction.
    """
    lits = _goal_literals(goal)
    extra = tuple(extra_facts)
    consts = _constants_of(lits) + [t.label for a in extra for t in a.args]
    b = _Builder(kb, depth_limit, abduce, ic_check, extra, abducibles, consts)
    st = {"rules": [], "facts": [], "fixed": [], "assumed": [], "neg": []}
    node = b.expand(tuple((l, frozenset()) for l in lits), st, 0)
    if b.depth_cut:
        warnings.warn(f"SLD tree for {', '.join(map(str, lits))} was cut at depth {depth_limit}", DepthCutWarning)
    return SldTree(lits, node, tuple(b.branches), b.depth_cut)


# explanations --------------------------------------------------------------


@dataclass(frozen=True)
class ExplanationSet:
    plus: frozenset = frozenset()
    minus: frozenset = frozenset()
    support: frozenset = field(default=frozenset(), compare=False)
    rules: tuple = field(default=(), compare=False)
    branch: int = field(default=-1, compare=False)

    def __post_init__(self):
        if self.plus & self.minus:
            raise HkbError("an atom is both inserted and deleted")

    def key(self):
        return (len(self.plus) + len(self.minus), [str(a) for a in sorted_atoms(self.plus)],
                [str(a) for a in sorted_atoms(self.minus)])

    def apply(self, edb: frozenset) -> frozenset:
        return (frozenset(edb) - self.minus) | self.plus

    def as_dict(self) -> dict:
        return {"insert": [str(a) for a in sorted_atoms(self.plus)],
                "delete": [str(a) for a in sorted_atoms(self.minus)]}

    def __str__(self):
        d = self.as_dict()
        return f"<+{{{', '.join(d['insert'])}}}, -{{{', '.join(d['delete'])}}}>"


@dataclass(frozen=True)
class ExplanationFamily:
    goal: tuple
    members: tuple = ()
    minimality: str = "kb-closed-locally-minimal"
    filtered: tuple = ()
    diagnostics: tuple = ()

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def pairs(self) -> set:
        return {(m.plus, m.minus) for m in self.members}


class _State:
    """Evaluation context: rules and constraints of kb over a varying EDB."""

    def __init__(self, kb: KnowledgeBase, goal_lits=()):
        self.kb = kb
        self.rule_only = KnowledgeBase(kb.immutable, (), kb.constraints, kb.declared_abducibles)
        self.universe = herbrand_universe(kb, _constants_of(goal_lits))
        self._models = {}
        self.fixed = kb.immutable_facts
        self.g = ground_program(kb, _constants_of(goal_lits))

    def model(self, edb) -> frozenset:
        key = frozenset(edb)
        got = self._models.get(key)
        if got is None:
            if len(self._models) > 4096:
                self._models.clear()
            got = semi_naive_model(self.rule_only, sorted_atoms(key | self.fixed), self.universe)
            self._models[key] = got
        return got

    def goal_holds(self, lits, model) -> bool:
        from .semantics import body_holds

        return body_holds(tuple(lits), model, self.universe)

    def violations(self, model) -> list:
        """Ground witness bodies (atom lists) of violated constraints."""
        from .semantics import body_witnesses

        out = []
        for c in self.kb.constraints:
            for w in body_witnesses(c.body, model, self.universe):
                out.append(w)
        return out

    def cone_facts(self, atoms, edb) -> list:
        """Stored facts the given atoms can depend on."""
        by_head = self._by_head()
        seen, stack = set(), list(atoms)
        while stack:
            a = stack.pop()
            if a in seen:
                continue
            seen.add(a)
            for r in by_head.get(a, ()):
                stack.extend(l.atom for l in r.body)
        return sorted_atoms(seen & frozenset(edb))

    def _by_head(self):
        got = getattr(self, "_bh", None)
        if got is None:
            got = {}
            for r in self.g.rules:
                got.setdefault(r.head, []).append(r)
            self._bh = got
        return got


def _repairs(state: _State, edb, plus, keep, negatives, ok, cap=BRANCH_CAP, diagnostics=None):
    """Minimal deletion sets D ⊆ edb \\ keep such that (edb \\ D) ∪ plus makes every
    negative false, violates no constraint and satisfies ok(model).

    Each step deletes one more stored fact from the cone of a true negative or of
    a violated witness, so the remaining deletable facts strictly shrink.
    """
    edb = frozenset(edb)
    keep = frozenset(keep) | frozenset(plus)
    found = []
    stack = [frozenset()]
    seen = set()
    steps = 0
    while stack:
        d = stack.pop()
        if d in seen or any(f <= d for f in found):
            continue
        seen.add(d)
        steps += 1
        if steps > cap * 16:
            if diagnostics is not None:
                diagnostics.append("repair search cap reached")
            break
        cur = (edb - d) | plus
        model = state.model(cur)
        problems = [[n] for n in negatives if n in model]
        problems += [list(l.atom for l in w) for w in state.violations(model)]
        if not problems:
            if ok(model):
                found.append(d)
            continue
        cands = [x for x in state.cone_facts(problems[0], cur - keep) if x in edb]
        if not cands:
            continue
        for x in reversed(cands):
            stack.append(d | {x})
        if len(found) >= cap:
            break
    out = [d for d in found if not any(o < d for o in found)]
    return sorted(set(out), key=lambda s: (len(s), [str(a) for a in sorted_atoms(s)]))


def _locally_minimal(state: _State, branch: SldBranch, plus, minus, goal_lits) -> bool:
    """No proper subset of Δ+ explains the goal with the branch's rules alone."""
    rules_kb = KnowledgeBase(tuple(dict.fromkeys(branch.rules)), (), (), None)
    base = (state.kb.edb - minus) | state.fixed
    for x in plus:
        rest = sorted_atoms((base | plus) - {x})
        model = semi_naive_model(rules_kb, rest, state.universe)
        if state.goal_holds(goal_lits, model) and not any(n in model for n in branch.negatives):
            return False
    return True


def insertion_explanations(
    kb: KnowledgeBase,
    goal,
    ic_order: str = "check-first",
    depth_limit: int = DEFAULT_DEPTH,
    cap: int = BRANCH_CAP,
) -> ExplanationFamily:
    """KB-closed locally minimal ⟨Δ+, Δ−⟩ making the goal derivable."""
    lits = _goal_literals(goal)
    state = _State(kb, lits)
    model = state.model(kb.edb)
    if state.goal_holds(lits, model) and not state.violations(model):
        return ExplanationFamily(lits, (ExplanationSet(),))
    check_first = ic_order in ("check-first", "first")
    tree = build_sld_tree(kb, lits, depth_limit, abduce=True, ic_check=check_first)
    members, filtered, diags = [], [], []
    seen = set()
    for b in tree.success():
        plus = frozenset(b.assumed)
        support = b.support
        if not check_first and not _support_ok(state, support):
            filtered.append(("ic", b.index))
            continue
        ok = lambda m, lits=lits: state.goal_holds(lits, m)
        for minus in _repairs(state, kb.edb, plus, support, b.negatives, ok, cap, diags):
            if not _locally_minimal(state, b, plus, minus, lits):
                filtered.append(("not-locally-minimal", b.index))
                continue
            e = ExplanationSet(plus, minus, support, b.rules, b.index)
            if not _closed(state, kb.edb, e, lits):
                filtered.append(("not-closed", b.index))
                continue
            if (plus, minus) not in seen:
                seen.add((plus, minus))
                members.append(e)
    return ExplanationFamily(lits, tuple(members), "kb-closed-locally-minimal", tuple(filtered), tuple(diags))


def _support_ok(state: _State, support) -> bool:
    model = state.model(support)
    return not state.violations(model)


def _closed(state: _State, edb, e: ExplanationSet, lits, want=True) -> bool:
    model = state.model(e.apply(edb))
    return state.goal_holds(lits, model) == want and not state.violations(model)


def deletion_explanations(
    kb: KnowledgeBase, goal, depth_limit: int = DEFAULT_DEPTH, cap: int = BRANCH_CAP
) -> ExplanationFamily:
    """KB-closed ⟨Δ+, Δ−⟩ making the goal underivable.

    Every refutation of the goal in the current KB has to be cut: either a
    stored fact it uses is deleted, or an atom it needs to be false is made
    true by an insertion explanation.
    """
    lits = _goal_literals(goal)
    state = _State(kb, lits)
    model = state.model(kb.edb)
    if not state.goal_holds(lits, model) and not state.violations(model):
        return ExplanationFamily(lits, (ExplanationSet(),))
    tree = build_sld_tree(kb, lits, depth_limit, abduce=False)
    refutations = tree.actual_success(model)
    options = []
    for b in refutations:
        opts = [(frozenset(), frozenset([f])) for f in sorted_atoms(b.facts)]
        for n in sorted_atoms(b.negatives):
            try:
                fam = insertion_explanations(kb, n, "check-first", depth_limit, cap)
            except NoExplanationError:
                continue
            opts += [(e.plus, e.minus) for e in fam.members if e.plus or e.minus]
        options.append(sorted(set(opts), key=lambda o: (len(o[0]) + len(o[1]), _names(o[0]), _names(o[1]))))
    diags = []
    candidates = set()
    if all(not o[0] for opts in options for o in opts):
        family = [frozenset(f for _, f in opts for f in f) for opts in options]
        from .change import minimal_hitting_sets

        if any(not s for s in family):
            return ExplanationFamily(lits, (), "kb-closed-locally-minimal", (), ("unhittable refutation",))
        for h in minimal_hitting_sets(family, kb.edb):
            candidates.add((frozenset(), h.elements))
    else:
        count = 0
        for combo in itertools.product(*options):
            count += 1
            if count > cap * 64:
                diags.append("deletion option product cap reached")
                break
            plus = frozenset().union(*[c[0] for c in combo]) if combo else frozenset()
            minus = frozenset().union(*[c[1] for c in combo]) if combo else frozenset()
            if plus & minus:
                continue
            candidates.add((plus, minus))
    members, filtered = [], []
    ok = lambda m: not state.goal_holds(lits, m)
    found = set()
    for plus, minus in sorted(candidates, key=lambda o: (len(o[0]) + len(o[1]), _names(o[0]), _names(o[1]))):
        base = kb.edb - minus
        extra = _repairs(state, base, plus, plus, (), ok, cap, diags)
        for d in extra:
            found.add((plus, minus | d))
    pairs = _minimal_pairs(found)
    for plus, minus in pairs:
        e = ExplanationSet(plus, minus, minus, (), -1)
        if _closed(state, kb.edb, e, lits, want=False):
            members.append(e)
        else:
            filtered.append(("not-closed", str(e)))
    members.sort(key=ExplanationSet.key)
    return ExplanationFamily(lits, tuple(members), "kb-closed-locally-minimal", tuple(filtered), tuple(diags))


def _names(s) -> list:
    return [str(a) for a in sorted_atoms(s)]


def _minimal_pairs(pairs) -> list:
    pairs = set(pairs)
    out = [p for p in pairs if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pairs)]
    return sorted(out, key=lambda o: (len(o[0]) + len(o[1]), _names(o[0]), _names(o[1])))


def locally_minimal_explanations(
    kb: KnowledgeBase,
    goal,
    ic_order: str = "check-first",
    delete: bool = False,
    depth_limit: int = DEFAULT_DEPTH,
    strict: bool = True,
) -> ExplanationFamily:
    """Algorithms 2 (check-first) and 3 (check-last) with the closure post-filter."""
    lits = _goal_literals(goal)
    if strict:
        for l in lits:
            if not l.atom.is_builtin:
                check_known(kb, l.atom)
    if delete:
        fam = deletion_explanations(kb, lits, depth_limit)
    else:
        fam = insertion_explanations(kb, lits, ic_order, depth_limit)
    if not fam.members:
        raise NoExplanationError(f"no explanation for {'deleting' if delete else 'inserting'} "
                                 + ", ".join(map(str, lits)))
    return fam


def minimal_explanations(fam: ExplanationFamily) -> ExplanationFamily:
    """Members not dominated componentwise by another member."""
    pairs = _minimal_pairs(fam.pairs())
    keep = [m for m in fam.members if (m.plus, m.minus) in set(pairs)]
    return ExplanationFamily(fam.goal, tuple(keep), "minimal", fam.filtered, fam.diagnostics)


# Algorithm 2/3 deltas -----------------------------------------------------------


@dataclass(frozen=True)
class BranchDeltas:
    delta_i: tuple = ()
    delta_j: tuple = ()

    @property
    def union_i(self) -> frozenset:
        return frozenset().union(*self.delta_i) if self.delta_i else frozenset()

    @property
    def union_j(self) -> frozenset:
        return frozenset().union(*self.delta_j) if self.delta_j else frozenset()


def branch_deltas(tree: SldTree, kb: KnowledgeBase) -> BranchDeltas:
    """Δi: support (used and assumed EDB facts) of every IC-consistent completable
    branch. Δj: for branches blocked by stored facts (a needed-false atom that is
    derivable, or a constraint clash with the current EDB) the stored facts
    whose deletion unblocks them."""
    state = _State(kb, tree.root)
    di, dj = [], []
    for b in tree.success():
        if not _support_ok(state, b.support):
            continue
        if b.support not in di:
            di.append(b.support)
        model = state.model(kb.edb | b.support)
        blocked = any(n in model for n in b.negatives) or state.violations(model)
        if blocked:
            reps = _repairs(state, kb.edb, frozenset(b.assumed), b.support, b.negatives, lambda m: True)
            if reps and reps[0] not in dj:
                dj.append(reps[0])
    return BranchDeltas(tuple(di), tuple(dj))


# kernels via SLD ----------------------------------------------------------------


def sld_kernels(kb: KnowledgeBase, alpha: HornClause, depth_limit: int = DEFAULT_DEPTH) -> list:
    """Minimal X ⊆ KB_I ∪ KB_U deriving α's body or a constraint body (definite programs)."""
    extra = (alpha.head,) if alpha.kind == "fact" else ()
    goals = []
    if alpha.kind == "constraint":
        goals.append(alpha.body)
    g = ground_program(kb, [t.label for a in alpha.atoms() for t in a.args])
    goals += [c.body for c in g.constraints]
    sets = set()
    for goal in goals:
        tree = build_sld_tree(kb, goal, depth_limit, abduce=False, extra_facts=extra)
        for b in tree.success():
            x = frozenset(b.rules) | frozenset(HornClause(a) for a in b.facts + b.fixed_facts)
            sets.add(x)
    return [s for s in sets if not any(t < s for t in sets)]


def explain_update(kb: KnowledgeBase, kb_after: KnowledgeBase, u: Atom, depth_limit: int = DEFAULT_DEPTH) -> list:
    """Minimal abducible sets T with KB_I ∪ T deriving u (u derivable in kb_after)."""
    state = _State(kb_after, (Literal(u),))
    if u not in state.model(kb_after.edb):
        return []
    empty = KnowledgeBase(kb_after.immutable, (), kb_after.constraints, kb_after.declared_abducibles or kb_after.abducibles)
    tree = build_sld_tree(empty, u, depth_limit, abduce=True)
    sets = set()
    for b in tree.success():
        t = frozenset(b.assumed)
        model = state.model(t)
        if u in model and not any(n in model for n in b.negatives):
            sets.add(t)
    out = [s for s in sets if not any(o < s for o in sets)]
    return sorted(out, key=lambda s: (len(s), _names(s)))
