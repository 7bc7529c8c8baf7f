"""Compare kernel-revision and partial-meet outcome classes on the random KB corpus.

Each incision reading is swept separately: every hitting set, minimal
hitting sets only, and unions of minimal hitting sets. The remainder and
kernel families are first checked against the subset-enumeration oracle.
"""

import argparse
import sys

from hkb.change import kernel_outcomes, kernels, partial_meet_outcomes, remainders
from hkb.lab.corpus import kb_corpus
from hkb.lab.oracles import oracle_kernels, oracle_remainders
from hkb.parser import serialize

READINGS = ("all", "minimal", "unions")


def families_match(inst) -> bool:
    key = lambda fam: sorted(sorted(map(str, m)) for m in fam)
    return (key(remainders(inst.kb, inst.alpha).members) == key(oracle_remainders(inst.kb, inst.alpha))
            and key(kernels(inst.kb, inst.alpha).members) == key(oracle_kernels(inst.kb, inst.alpha)))


def sweep(seed: int, count: int, reading: str) -> list:
    bad = []
    for inst in kb_corpus(seed, count):
        k = set(kernel_outcomes(inst.kb, inst.alpha, reading))
        p = set(partial_meet_outcomes(inst.kb, inst.alpha, "all"))
        if k != p:
            bad.append((inst, len(k - p), len(p - k)))
    return bad


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--reading", choices=READINGS, action="append")
    args = ap.parse_args()
    corpus = kb_corpus(args.seed, args.count)
    mismatched = [i.label for i in corpus if not families_match(i)]
    print(f"families vs oracle: {len(corpus) - len(mismatched)}/{len(corpus)}")
    status = 1 if mismatched else 0
    for reading in args.reading or READINGS:
        bad = sweep(args.seed, args.count, reading)
        print(f"incisions={reading}: {len(bad)} counterexamples")
        if bad:
            inst, only_k, only_p = bad[0]
            print(f"  first: {inst.label}  alpha {inst.alpha}  kernel-only {only_k}  partial-meet-only {only_p}")
            print("  " + " ".join(serialize(inst.kb).split()))
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
