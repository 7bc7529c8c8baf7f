"""Seeded sweep of the abductive-framework oracle.

Exhaustive tier (|Ab| ≤ 4): α ranges over every cube over Ab, and over every
model set when |Ab| ≤ 2; β over the literals. Randomized tier (|Ab| ≤ 10):
random frameworks and random sentences.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .abductive import (
    Not,
    Top,
    Var,
    brute_minimal_explanations,
    cn_properties,
    conj,
    contraction_postulates,
    dalal_order,
    disjunction_models,
    harper_round_trip,
    levi_round_trip,
    lit_sentence,
    minimal_explanations,
    model_contraction,
    model_revision,
    revision_postulates,
    validate_order,
)
from .corpus import random_framework, random_sentence

CN_NAMES = ("inclusion", "iteration", "monotony")
BRUTE_BOUND = 6
ORDER_BOUND = 6  # the order axioms are cubic in the number of interpretations


@dataclass
class SuiteReport:
    seed: int
    counts: dict = field(default_factory=dict)  # check -> [checked, failed]
    witnesses: dict = field(default_factory=dict)  # check -> first failure
    frameworks: int = 0
    seconds: float = 0.0
    unit: str = "frameworks"

    def record(self, name, ok, witness=None):
        c = self.counts.setdefault(name, [0, 0])
        c[0] += 1
        if not ok:
            c[1] += 1
            self.witnesses.setdefault(name, witness)

    def failed(self, prefix="") -> int:
        return sum(f for n, (_, f) in self.counts.items() if n.startswith(prefix))

    @property
    def ok(self) -> bool:
        return self.failed() == 0

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            self.unit: self.frameworks,
            "checks": {n: {"checked": c, "failed": f} for n, (c, f) in sorted(self.counts.items())},
            "witnesses": {n: w for n, w in sorted(self.witnesses.items())},
        }

    def lines(self) -> list:
        out = [f"{n}: {c - f}/{c}" + (f"  first failure: {self.witnesses[n]}" if f else "")
               for n, (c, f) in sorted(self.counts.items())]
        return out + [f"{self.unit}: {self.frameworks}"]


def cubes(fw) -> list:
    out = []
    for signs in itertools.product((None, True, False), repeat=len(fw.abducibles)):
        lits = [Var(a) if s else Not(Var(a)) for a, s in zip(fw.abducibles, signs) if s is not None]
        out.append(conj(*lits) if lits else Top())
    return out


def literals(fw) -> list:
    return [s for a in fw.abducibles for s in (Var(a), Not(Var(a)))]


def check_framework(fw, alphas, betas, report: SuiteReport, tag: str, brute: bool = True):
    report.frameworks += 1
    order = dalal_order(fw)
    if len(fw.abducibles) <= ORDER_BOUND:
        for v in validate_order(order, dalal_order):
            report.record(f"order {v.name}", v.passed, f"{tag}: {v.witness}")
    pool = tuple(alphas[:12]) + tuple(betas)
    for v in cn_properties(fw, fw.knowledge, betas[:1], pool):
        if v.name in CN_NAMES:
            report.record(f"Cn {v.name}", v.passed, f"{tag}: {v.witness}")
    revise = lambda f, s: model_revision(f, s, dalal_order(f))
    contract = lambda f, s: model_contraction(f, s, dalal_order(f))
    for a in alphas:
        report.record("levi", levi_round_trip(fw, a, order), f"{tag}: alpha={a}")
        report.record("harper", harper_round_trip(fw, a, order), f"{tag}: alpha={a}")
        for b in betas:
            for v in revision_postulates(fw, revise, a, b):
                report.record(f"revision {v.name}", v.passed, f"{tag}: alpha={a} beta={b}: {v.witness}")
            for v in contraction_postulates(fw, contract, a, b):
                report.record(f"contraction {v.name}", v.passed, f"{tag}: alpha={a} beta={b}: {v.witness}")
        exps = minimal_explanations(fw, a)
        if brute and len(fw.abducibles) <= BRUTE_BOUND:
            same = exps == brute_minimal_explanations(fw, a, BRUTE_BOUND)
            report.record("explanations vs brute force", same, f"{tag}: alpha={a}")
        for d1, d2 in itertools.combinations(exps, 2):
            m1 = fw.mod(lit_sentence(l) for l in d1) & fw.s_bits
            m2 = fw.mod(lit_sentence(l) for l in d2) & fw.s_bits
            got = disjunction_models(fw, [d1, d2]).bits
            report.record("disjunction", got == m1 | m2, f"{tag}: alpha={a} {d1} | {d2}")


def every_model_set(fw) -> list:
    return [fw.characteristic(bits) for bits in range(1, fw.full + 1)]


def run_suite(seed: int = 0, exhaustive_max: int = 4, random_max: int = 10,
              per_size: int = 3, random_count: int = 6, sentences: int = 4) -> SuiteReport:
    """Every check is a model-enumeration identity; the report counts checks and failures."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    report = SuiteReport(seed)
    for n in range(1, exhaustive_max + 1):
        for i in range(per_size):
            fw = random_framework(rng, n)
            alphas = cubes(fw) + (every_model_set(fw) if n <= 2 else [])
            check_framework(fw, alphas, literals(fw), report, f"n={n}#{i}")
    for i in range(random_count):
        n = rng.randint(exhaustive_max + 1, random_max) if random_max > exhaustive_max else random_max
        fw = random_framework(rng, n, n_derived=3)
        names = list(fw.abducibles)
        alphas = [random_sentence(rng, names, 2) for _ in range(sentences)]
        betas = [random_sentence(rng, names, 1) for _ in range(2)]
        check_framework(fw, alphas, betas, report, f"random n={n}#{i}")
    report.seconds = time.perf_counter() - t0
    return report

