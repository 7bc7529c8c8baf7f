"""Command-line front end; every subcommand is a thin adapter over the library.

Exit codes: 0 success, 1 impossible update or failed check, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abduction import DEFAULT_DEPTH, NoExplanationError, locally_minimal_explanations
from .change import kernel_outcomes, kernel_revision, partial_meet_outcomes, partial_meet_revision, strategy
from .core import HkbError, sorted_atoms
from .lab.postulates import check_revision_postulates
from .parser import load, parse_atom, parse_clause, serialize
from .revision import all_minimal_revisions
from .semantics import least_herbrand_model
from .tableau import transform_idb_bullet, transform_idb_star, transform_materialized
from .viewupdate import ALGOS, ImpossibleUpdateError, apply_transaction, check_transaction, view_update

SCHEMA = "hkb/1"
IC_ORDERS = {"first": "check-first", "last": "check-last"}
REVISE_ALGOS = ("generalized", "kernel", "partial-meet")
STRATEGIES = ("minimal", "maximal", "full-meet", "maxichoice")
TRANSFORMS = ("idb-star", "idb-bullet-body", "idb-bullet-head", "idb-plus", "idb-minus-body", "idb-minus-head")


class Exit(Exception):
    def __init__(self, code, message=""):
        super().__init__(message)
        self.code = code


def names(atoms) -> list:
    return [str(a) for a in sorted_atoms(atoms)]


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def emit(args, payload: dict, text_lines):
    if args.json:
        print(dump({"schema": SCHEMA, "command": args.command, **payload}))
    else:
        for line in text_lines:
            print(line)


def _goal_atom(text: str):
    try:
        return parse_atom(text)
    except HkbError as e:
        raise Exit(2, f"goal {text!r}: {e}")


def _goal_clause(text: str):
    try:
        return parse_clause(text)
    except HkbError as e:
        raise Exit(2, f"goal {text!r}: {e}")


# subcommands ------------------------------------------------------------------


def cmd_model(args) -> int:
    kb = load(args.file)
    model = names(least_herbrand_model(kb).atoms)
    emit(args, {"model": model}, model)
    return 0


def _revise_change(args, kb, alpha) -> list:
    strat = strategy(args.strategy)
    if args.all_solutions:
        outcomes = kernel_outcomes(kb, alpha, "minimal") if args.algo == "kernel" else partial_meet_outcomes(kb, alpha, "single")
        results = [outcomes[k] for k in sorted(outcomes)]
    else:
        op = kernel_revision if args.algo == "kernel" else partial_meet_revision
        results = [op(kb, alpha, strat)]
    out = []
    for after in results:
        out.append({"insert": names(after.edb - kb.edb), "delete": names(kb.edb - after.edb),
                    "edb_after": names(after.edb), "status": "revised" if after.edb != kb.edb else "unchanged",
                    "program": serialize(after)})
    return out


def cmd_revise(args) -> int:
    kb = load(args.file)
    alpha = _goal_clause(args.goal)
    if args.algo != "generalized":
        sols = _revise_change(args, kb, alpha)
        for s in sols:
            del s["program"]
        lines = [f"+{{{', '.join(s['insert'])}}} -{{{', '.join(s['delete'])}}}  EDB' = {{{', '.join(s['edb_after'])}}}"
                 for s in sols]
        emit(args, {"algo": args.algo, "strategy": args.strategy, "solutions": sols}, lines)
        return 0
    outs = all_minimal_revisions(kb, alpha, IC_ORDERS[args.ic_order], args.depth_limit, trace=args.trace)
    if not args.all_solutions:
        outs = outs[:1]
    sols, lines = [], []
    for o in outs:
        sol = {"insert": names(o.inserted), "delete": names(o.deleted), "edb_after": names(o.kb_after.edb),
               "status": o.status}
        if args.trace:
            sol["trace"] = [{"label": s.label, "text": s.text} for s in o.trace]
            lines += [str(s) for s in o.trace]
        sols.append(sol)
        lines.append(f"{o.status}: +{{{', '.join(sol['insert'])}}} -{{{', '.join(sol['delete'])}}}"
                     f"  KB_U* = {{{', '.join(sol['edb_after'])}}}")
    emit(args, {"algo": "generalized", "solutions": sols}, lines)
    return 1 if outs[0].status in ("impossible", "unsatisfiable") else 0


def cmd_view_update(args) -> int:
    ddb = load(args.file, ddb=True)
    mode = "insert" if args.insert is not None else "delete"
    request = _goal_atom(args.insert if args.insert is not None else args.delete)
    try:
        txns = view_update(ddb, request, mode, args.algo, args.all_solutions, args.union)
    except ImpossibleUpdateError as e:
        emit(args, {"request": {mode: str(request)}, "algo": args.algo, "solutions": [], "status": "impossible",
                    "reason": str(e)}, [f"impossible: {e}"])
        return 1
    if not args.all_solutions and not args.union:
        txns = txns[:1]
    sols, lines = [], []
    for t in txns:
        sol = dict(t.as_dict(), algo=args.algo, edb_after=names(apply_transaction(ddb, t).edb))
        line = f"{t}  EDB' = {{{', '.join(sol['edb_after'])}}}"
        if not args.no_checks and not t.is_empty():
            report = check_transaction(ddb, request, mode, t, args.algo)
            sol["checks"] = report.as_dict()
            line += "  checks: " + ("pass" if report.passed(list(sol["checks"])) else
                                    "fail " + ", ".join(v.name for v in report.failures()))
        sols.append(sol)
        lines.append(line)
    emit(args, {"request": {mode: str(request)}, "algo": args.algo, "solutions": sols, "status": "ok"}, lines)
    return 0


def cmd_explain(args) -> int:
    kb = load(args.file)
    goal = _goal_atom(args.goal)
    try:
        fam = locally_minimal_explanations(kb, goal, IC_ORDERS[args.ic_order], args.delete, args.depth_limit)
    except NoExplanationError as e:
        emit(args, {"goal": str(goal), "explanations": [], "reason": str(e)}, [f"none: {e}"])
        return 1
    members = [m.as_dict() for m in fam.members]
    emit(args, {"goal": str(goal), "mode": "delete" if args.delete else "insert", "explanations": members},
         [str(m) for m in fam.members])
    return 0


def cmd_check(args) -> int:
    kb = load(args.file)
    alpha = _goal_clause(args.goal)
    after = load(args.after) if args.after else all_minimal_revisions(kb, alpha, trace=False)[0].kb_after
    report = check_revision_postulates(kb, alpha, after)
    emit(args, {"goal": str(alpha), "checks": report.as_dict(), "passed": report.passed()}, [str(report)])
    return 0 if report.passed() else 1


def cmd_transform(args) -> int:
    ddb = load(args.file, ddb=True)
    if args.kind == "idb-star":
        prog = transform_idb_star(ddb)
    elif args.kind.startswith("idb-bullet"):
        prog = transform_idb_bullet(ddb)[0 if args.kind == "idb-bullet-body" else 1]
    else:
        prog = transform_materialized(ddb)[args.kind]
    lines = prog.latex_lines() if args.latex else prog.lines()
    emit(args, {"kind": args.kind, "clauses": lines}, lines)
    return 0


def cmd_lab(args) -> int:
    from .lab.suite import run_suite

    report = run_suite(args.seed, args.exhaustive_max, args.random_max, random_count=args.instances)
    emit(args, report.as_dict(), report.lines())
    return 0 if report.ok else 1


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkb", description="Belief revision and view update for Horn knowledge bases.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--json", action="store_true", help="versioned, byte-stable JSON on stdout")

    sp = sub.add_parser("model", help="least Herbrand model")
    common(sp)
    sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("revise", help="revise KB_U by a fact or denial")
    common(sp)
    sp.add_argument("--goal", required=True, help="'p(a)' or ':- p(a)'")
    sp.add_argument("--algo", choices=REVISE_ALGOS, default="generalized")
    sp.add_argument("--strategy", choices=STRATEGIES, default="minimal")
    sp.add_argument("--ic-order", choices=tuple(IC_ORDERS), default="first")
    sp.add_argument("--depth-limit", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--all-solutions", action="store_true")
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_revise)

    sp = sub.add_parser("view-update", help="translate a view update into a base transaction")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--insert", metavar="ATOM")
    g.add_argument("--delete", metavar="ATOM")
    sp.add_argument("--algo", choices=ALGOS, default="materialized")
    sp.add_argument("--all-solutions", action="store_true")
    sp.add_argument("--union", "--all-facts", dest="union", action="store_true", help="merge every solution into one transaction")
    sp.add_argument("--no-checks", action="store_true", help="skip the postulate checks")
    sp.set_defaults(func=cmd_view_update)

    sp = sub.add_parser("explain", help="locally minimal explanations")
    common(sp)
    sp.add_argument("--goal", required=True)
    sp.add_argument("--delete", action="store_true")
    sp.add_argument("--ic-order", choices=tuple(IC_ORDERS), default="first")
    sp.add_argument("--depth-limit", type=int, default=DEFAULT_DEPTH)
    sp.set_defaults(func=cmd_explain)

    sp = sub.add_parser("check", help="postulate report for one revision")
    common(sp)
    sp.add_argument("--goal", "--alpha", dest="goal", required=True)
    sp.add_argument("--after", "--against", dest="after", help="revised program; default: the first minimal revision")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("transform", help="print a transformed IDB")
    common(sp)
    sp.add_argument("--kind", choices=TRANSFORMS, default="idb-star")
    sp.add_argument("--latex", action="store_true")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("lab", help="seeded sweep of the abductive-framework oracle")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--exhaustive-max", type=int, default=4)
    sp.add_argument("--random-max", type=int, default=10)
    sp.add_argument("--instances", type=int, default=6, help="randomized-tier frameworks")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lab)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except Exit as e:
        print(f"hkb: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"hkb: {e.filename}: {e.strerror}", file=sys.stderr)
        return 2
    except HkbError as e:
        print(f"hkb: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
