"""Command-line front end.

Exit codes: 0 for a true verdict or general success, 1 for a false
verdict or an exhausted witness search, 2 for undetermined results and
usage or input errors.  ``--json`` switches every subcommand to a
machine-readable report on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ccref
from .dnf import ensure_df
from .elim import DEFAULT_LIMITS, Limits, check_cc, eliminate
from .errors import CcmuError
from .lts import load_pointed, model_to_json
from .search import witness_search
from .syntax import parse, render, signature
from .tableau import build_tableau, find_marking, to_dot

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_UNDETERMINED = 2


def _parse_caps(text: str) -> Limits:
    caps = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        caps[key.strip()] = int(value)
    return Limits(
        sat_depth_cap=caps.get("depth", DEFAULT_LIMITS.sat_depth_cap),
        unsat_model_cap=caps.get("states", DEFAULT_LIMITS.unsat_model_cap),
        sat_node_budget=caps.get("nodes", DEFAULT_LIMITS.sat_node_budget),
        unsat_model_budget=caps.get("models", DEFAULT_LIMITS.unsat_model_budget),
    )


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(human)


def _actions(text: str) -> list[str]:
    return [a for a in text.split(",") if a]


def cmd_check(args) -> int:
    pm = load_pointed(args.model)
    f = parse(args.formula, pm.model.alphabet)
    verdict = check_cc(pm, f, fallback_bound=args.fallback_bound, limits=args.caps)
    doc = {"verdict": verdict.value}
    if verdict.reason:
        doc["reason"] = verdict.reason
        doc["detail"] = verdict.detail
    _emit(args, doc, f"{verdict.value}" + (f" ({verdict.reason})" if verdict.reason else ""))
    if verdict.is_true():
        return EXIT_TRUE
    if verdict.is_false():
        return EXIT_FALSE
    return EXIT_UNDETERMINED


def cmd_refines(args) -> int:
    spec = load_pointed(args.spec)
    impl = load_pointed(args.impl)
    sig = signature(_actions(args.cov), _actions(args.contra))
    p_set = _actions(args.restrict) if args.restrict else []
    rel = ccref.largest_refinement(spec.model, impl.model, p_set, sig)
    holds = (spec.point, impl.point) in rel.pairs
    if args.emit_relation:
        with open(args.emit_relation, "w", encoding="utf-8") as fh:
            json.dump(sorted(rel.pairs), fh, indent=2)
    _emit(
        args,
        {"refines": holds, "pairs": sorted(rel.pairs)},
        f"{'refines' if holds else 'does not refine'} "
        f"({len(rel.pairs)} pairs in the largest relation)",
    )
    return EXIT_TRUE if holds else EXIT_FALSE


def cmd_translate(args) -> int:
    f = parse(args.formula)
    try:
        xi = eliminate(f, args.caps)
    except CcmuError as e:
        _emit(
            args,
            {"error": {"kind": type(e).__name__, "message": str(e)}},
            f"error: {type(e).__name__}: {e}",
        )
        return EXIT_UNDETERMINED
    _emit(args, {"formula": render(xi)}, render(xi))
    return EXIT_TRUE


def cmd_witness(args) -> int:
    pm = load_pointed(args.model)
    f = parse(args.formula, pm.model.alphabet)
    sig = signature(_actions(args.cov), _actions(args.contra))
    found = witness_search(pm, sig, f, args.max_states)
    if found is None:
        _emit(
            args,
            {"found": False, "max_states": args.max_states},
            f"no witness within {args.max_states} states",
        )
        return EXIT_FALSE
    rel = ccref.largest_refinement(pm.model, found.model, (), sig)
    doc = {
        "found": True,
        "model": json.loads(model_to_json(found.model, found.point)),
        "relation": sorted(rel.pairs),
    }
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
    _emit(
        args,
        doc,
        f"witness with {len(found.model.states)} states at {found.point}\n"
        + model_to_json(found.model, found.point),
    )
    return EXIT_TRUE


def cmd_dnf(args) -> int:
    f = parse(args.formula)
    try:
        d = ensure_df(f)
    except CcmuError as e:
        _emit(
            args,
            {"error": {"kind": type(e).__name__, "message": str(e)}},
            f"error: {type(e).__name__}: {e}",
        )
        return EXIT_UNDETERMINED
    _emit(args, {"formula": render(d)}, render(d))
    return EXIT_TRUE


def cmd_tableau(args) -> int:
    f = parse(args.formula)
    try:
        t = build_tableau(f)
    except CcmuError as e:
        _emit(
            args,
            {"error": {"kind": type(e).__name__, "message": str(e)}},
            f"error: {type(e).__name__}: {e}",
        )
        return EXIT_UNDETERMINED
    marking = None
    code = EXIT_TRUE
    if args.model:
        pm = load_pointed(args.model)
        marking = find_marking(t, pm)
        code = EXIT_TRUE if marking is not None else EXIT_FALSE
    dot = to_dot(t, marking)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot + "\n")
    doc = {
        "nodes": [
            {
                "id": n.nid,
                "label": sorted(render(g) for g in n.label),
                "rule": n.rule,
                "modal": n.modal,
                "children": [[act, c] for (act, c) in n.children],
            }
            for n in t.nodes
        ],
    }
    human = dot
    if args.model:
        doc["marking"] = sorted(marking.pairs) if marking is not None else None
        human += "\n" + (
            f"marking: {sorted(marking.pairs)}" if marking is not None else "no marking"
        )
    _emit(args, doc, human)
    return code


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    sink = (lambda line: None) if args.json else print
    results = run_selftest(
        witness_states=args.max_states,
        intermediate_states=args.intermediates,
        oracle_states=args.oracle_states,
        corpus_size=args.corpus_size,
        report=sink,
    )
    if args.json:
        print(
            json.dumps(
                [
                    {"suite": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results
                ],
                indent=2,
            )
        )
    return EXIT_TRUE if all(r.passed for r in results) else EXIT_UNDETERMINED


def main(argv=None) -> int:
    top = argparse.ArgumentParser(
        prog="ccmu",
        description="Refinement modal mu-calculus: check, translate, refine, search",
    )
    top.add_argument("--json", action="store_true", help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a formula at a pointed model")
    p.add_argument("--model", required=True, help="model.json#state")
    p.add_argument("--formula", required=True)
    p.add_argument("--fallback-bound", type=int, default=0)
    p.add_argument("--caps", type=_parse_caps, default=DEFAULT_LIMITS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("refines", help="compute the largest refinement relation")
    p.add_argument("--spec", required=True)
    p.add_argument("--impl", required=True)
    p.add_argument("--cov", default="")
    p.add_argument("--contra", default="")
    p.add_argument("--restrict", default="")
    p.add_argument("--emit-relation")
    p.set_defaults(func=cmd_refines)

    p = sub.add_parser("translate", help="eliminate refinement quantifiers")
    p.add_argument("--formula", required=True)
    p.add_argument("--caps", type=_parse_caps, default=DEFAULT_LIMITS)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("witness", help="bounded search for a refined model")
    p.add_argument("--model", required=True)
    p.add_argument("--cov", required=True)
    p.add_argument("--contra", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-states", type=int, default=3)
    p.add_argument("--emit")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("dnf", help="disjunctive form of a formula")
    p.add_argument("--formula", required=True)
    p.set_defaults(func=cmd_dnf)

    p = sub.add_parser("tableau", help="tableau and marking for a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--model")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_tableau)

    p = sub.add_parser("selftest", help="run the property suites")
    p.add_argument("--max-states", type=int, default=3, help="witness bound")
    p.add_argument("--intermediates", type=int, default=2)
    p.add_argument("--oracle-states", type=int, default=3)
    p.add_argument("--corpus-size", type=int, default=0, help="0 = full corpus")
    p.set_defaults(func=cmd_selftest)

    args = top.parse_args(argv)
    try:
        return args.func(args)
    except CcmuError as e:
        msg = {"error": {"kind": type(e).__name__, "message": str(e)}}
        if args.json:
            print(json.dumps(msg, indent=2))
        else:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNDETERMINED


if __name__ == "__main__":
    sys.exit(main())
