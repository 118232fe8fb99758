"""Command line entry point ``ail``.

Exit status: 0 for an affirmative or accepted result, 1 for a negative or
rejected one, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources

from . import catalogue as cat
from .checker import (
    COUNTERMODEL_FOUND,
    FormulaError,
    PointedModel,
    SearchBounds,
    VALID_UP_TO_BOUND,
    find_countermodel,
    model_valid,
    satisfies,
    truth_set,
)
from .fh_bridge import NotFhFormula, find_bisimulation, satisfies_fh, translate
from .model import EpistemicModel, ModelError
from .proof import CapacityError, Proof, ProofResult, check_proof
from .syntax import ParseError, UnsupportedFormula, parse, to_text

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

DEMO_ROWS = [
    ("(1)", "A[a] p2 & A[a] p3 & A[a] f3 & A[a] p4"),
    ("(2)", "A[b] p2 & ~A[b] p3 & A[b] f3 & A[b] p4"),
    ("(3)", "I[a] f3 & I[b] f3"),
    ("(4)", "I[a](p2 & p3 & f3 -> p4) & I[b](p2 & p3 & f3 -> p4)"),
    ("(5)", "I[a] p2 & I[a] p3 & I[b] p2 & I[b] p3"),
    ("(6)", "I[a] p4 & I[b] p4"),
    ("b", "~A[b] p3 & A[b](p2 & f3 & p4) & I[b](p2 & p3 & f3) & I[b](p2 & p3 & f3 -> p4) & I[b] p4 & ~E[b] p4"),
    ("(7)", "E[a] p4"),
    ("(8)", "E[b] p4"),
]


GLOBAL_DEFAULTS = {"json": False, "seed": 0, "max_worlds": None, "close_ik": False}


class UsageError(Exception):
    pass


def data_path(name: str):
    return resources.files("ail.data").joinpath(name)


def _load_model(path: str, close_ik: bool) -> EpistemicModel:
    """Load a model file.  ``@name`` refers to a bundled asset and a
    ``#key`` suffix selects ``data[key]["model"]`` from a file of several."""
    path, _, key = path.partition("#")
    if path.startswith("@"):
        path = str(data_path(path[1:]))
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if key:
        if key not in data:
            raise UsageError(f"{path} has no entry {key!r}")
        data = data[key]["model"]
    m = EpistemicModel.from_dict(data, close_ik=close_ik)
    m.indexed  # validates
    return m


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _csv(value: str | None):
    if value is None:
        return None
    return frozenset(x.strip() for x in value.split(",") if x.strip())


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    m = _load_model(args.model, args.close_ik)
    f = parse(args.formula)
    ok = satisfies(PointedModel(m, args.world), f)
    _emit(args, "true" if ok else "false", {"formula": to_text(f), "world": args.world, "value": ok})
    return EXIT_YES if ok else EXIT_NO


def cmd_valid(args) -> int:
    m = _load_model(args.model, args.close_ik)
    f = parse(args.formula)
    ok = model_valid(m, f)
    failing = sorted(set(m.worlds) - truth_set(m, f), key=m.worlds.index)
    text = "true" if ok else "false (fails at " + ", ".join(failing) + ")"
    _emit(args, text, {"formula": to_text(f), "valid": ok, "failing_worlds": failing})
    return EXIT_YES if ok else EXIT_NO


def cmd_countermodel(args) -> int:
    f = parse(args.formula)
    bounds = SearchBounds(args.max_worlds or 3, _csv(args.atoms), _csv(args.agents), args.deadline)
    out = find_countermodel(f, bounds)
    payload = {
        "formula": to_text(f),
        "verdict": out.verdict,
        "models_checked": out.models_checked,
        "max_worlds": out.max_worlds,
        "closure_size": out.closure_size,
    }
    if out.witness is not None:
        payload["witness"] = {"world": out.witness.world, "model": out.witness.model.to_dict()}
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(out.summary())
        if out.witness is not None:
            print(f"falsified at world {out.witness.world} of:")
            print(json.dumps(out.witness.model.to_dict(), indent=2))
    return EXIT_YES if out.verdict == VALID_UP_TO_BOUND else EXIT_NO


def cmd_translate(args) -> int:
    f = parse(args.formula)
    t = translate(f)
    _emit(args, to_text(t), {"formula": to_text(f), "translation": to_text(t)})
    return EXIT_YES


def cmd_fh_check(args) -> int:
    m = _load_model(args.model, args.close_ik)
    f = parse(args.formula)
    ok = satisfies_fh(PointedModel(m, args.world), f)
    _emit(args, "true" if ok else "false", {"formula": to_text(f), "world": args.world, "value": ok})
    return EXIT_YES if ok else EXIT_NO


def cmd_bisim(args) -> int:
    m1 = _load_model(args.m1, args.close_ik)
    m2 = _load_model(args.m2, args.close_ik)
    rel = find_bisimulation(PointedModel(m1, args.w1), PointedModel(m2, args.w2))
    if rel is None:
        _emit(args, "not-bisimilar", {"bisimilar": False})
        return EXIT_NO
    pairs = sorted(rel)
    text = "bisimilar\n" + "\n".join(f"{a} {b}" for a, b in pairs)
    _emit(args, text, {"bisimilar": True, "relation": [list(p) for p in pairs]})
    return EXIT_YES


def cmd_prove(args) -> int:
    try:
        pf = Proof.load(args.proof)
    except (ParseError, UnsupportedFormula) as exc:
        res = ProofResult(False, None, "parse-error", str(exc))
    else:
        res = check_proof(pf, infer_axiom=args.infer_axiom)
    payload = {"accepted": res.accepted, "line": res.line, "reason": res.reason, "detail": res.detail}
    _emit(args, str(res), payload)
    return EXIT_YES if res.accepted else EXIT_NO


def cmd_demo(args) -> int:
    if args.name != "example4":
        raise UsageError(f"unknown demo {args.name!r}; available: example4")
    m = _load_model(str(data_path("example4.json")), False)
    pm = PointedModel(m, "w")
    rows = []
    for label, text in DEMO_ROWS:
        rows.append({"label": label, "formula": text, "value": satisfies(pm, parse(text))})
    fh = satisfies_fh(pm, parse("E[b] p4"))
    if args.json:
        print(json.dumps({"world": "w", "rows": rows, "fh_E[b] p4": fh}))
    else:
        print("Example 4 model at world w")
        print(f"  FH reading: E[b] p4: {str(fh).lower()}")
        for r in rows:
            print(f"{r['label']:>4} {r['formula']}: {str(r['value']).lower()}")
    # the two final rows are the point of the example
    expected = [True] * (len(rows) - 1) + [False]
    return EXIT_YES if [r["value"] for r in rows] == expected else EXIT_NO


def cmd_catalogue(args) -> int:
    try:
        entries = cat.load_catalogue(args.name)
    except FileNotFoundError:
        raise UsageError(f"unknown catalogue {args.name!r}; available: section34")
    rows = cat.run_catalogue(entries, max_worlds=args.max_worlds or 4, workers=args.workers)
    if args.json:
        print(json.dumps([
            {
                "name": r.entry.name,
                "schema": r.entry.schema,
                "expected": r.entry.expected,
                "verdict": r.verdict,
                "pass": r.passed,
                "instances": [{"formula": to_text(f), "verdict": o.verdict} for f, o in r.report.results],
            }
            for r in rows
        ], ensure_ascii=False))
    else:
        width = max(len(r.entry.name) for r in rows)
        for r in rows:
            mark = "PASS" if r.passed else "FAIL"
            print(f"{mark}  {r.entry.name:<{width}}  expected {r.entry.expected:<7}  got {r.verdict}")
            if not r.passed:
                for f, o in r.report.results:
                    if o.verdict == COUNTERMODEL_FOUND:
                        print(f"        countermodel for {to_text(f)} at {o.witness.world}")
        print(f"{sum(r.passed for r in rows)}/{len(rows)} rows pass")
    return EXIT_YES if all(r.passed for r in rows) else EXIT_NO


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from overwriting a flag given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for anything randomized (default 0)")
    common.add_argument("--max-worlds", type=int, default=argparse.SUPPRESS, help="search bound on model size")
    common.add_argument(
        "--close-ik", action="store_true", default=argparse.SUPPRESS, help="close IK pair lists into equivalences"
    )

    p = argparse.ArgumentParser(prog="ail", description="Awareness-based indistinguishability logic tools", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "truth of a formula at a pointed model")
    sp.add_argument("-m", "--model", required=True)
    sp.add_argument("-w", "--world", required=True)
    sp.add_argument("-f", "--formula", required=True)

    sp = add("valid", cmd_valid, "truth of a formula at every world of a model")
    sp.add_argument("-m", "--model", required=True)
    sp.add_argument("-f", "--formula", required=True)

    sp = add("countermodel", cmd_countermodel, "bounded search for a falsifying pointed model")
    sp.add_argument("-f", "--formula", required=True)
    sp.add_argument("--atoms", help="comma separated atom universe (default: atoms of the formula)")
    sp.add_argument("--agents", help="comma separated agent universe (default: agents of the formula)")
    sp.add_argument("--deadline", type=float, help="wall-clock budget in seconds")

    sp = add("translate", cmd_translate, "translate an FH formula into the full language")
    sp.add_argument("-f", "--formula", required=True)

    sp = add("fh-check", cmd_fh_check, "FH truth of a formula at a pointed model")
    sp.add_argument("-m", "--model", required=True)
    sp.add_argument("-w", "--world", required=True)
    sp.add_argument("-f", "--formula", required=True)

    sp = add("bisim", cmd_bisim, "decide bisimilarity of two pointed models")
    sp.add_argument("-m1", dest="m1", required=True)
    sp.add_argument("-w1", dest="w1", required=True)
    sp.add_argument("-m2", dest="m2", required=True)
    sp.add_argument("-w2", dest="w2", required=True)

    sp = add("prove", cmd_prove, "check a Hilbert-style proof file")
    sp.add_argument("-p", "--proof", required=True)
    sp.add_argument("--infer-axiom", action="store_true", help="accept axiom lines matching any schema")

    sp = add("demo", cmd_demo, "reproduce a worked example")
    sp.add_argument("name", help="example4")

    sp = add("catalogue", cmd_catalogue, "run a schema catalogue through bounded search")
    sp.add_argument("name", help="section34")
    sp.add_argument("--workers", type=int, default=1)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_YES
    for name, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.max_worlds is not None and args.max_worlds < 1:
        print("ail: error: --max-worlds must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    random.seed(args.seed)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ail: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, UnsupportedFormula, FormulaError, ModelError, NotFhFormula, CapacityError, ValueError, OSError) as exc:
        print(f"ail: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
