"""Run the abductive-framework oracle suite and the view-update corpus sweep."""

import argparse
import json
import sys

from hkb.lab.suite import run_suite
from hkb.lab.vusweep import run_sweep


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ddbs", type=int, default=200, help="corpus size for the view-update sweep (0 skips it)")
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    reports = {"oracle": run_suite(args.seed)}
    if args.ddbs:
        reports["view-update"] = run_sweep(args.seed, args.ddbs)
    if args.json:
        print(json.dumps({k: r.as_dict() for k, r in reports.items()}, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        for k, r in reports.items():
            print(f"[{k}] {r.seconds:.1f}s")
            for line in r.lines():
                print("  " + line)
            for name, w in sorted(r.witnesses.items()):
                print(f"  witness {name}: {w}")
    return 0 if all(r.ok for r in reports.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
