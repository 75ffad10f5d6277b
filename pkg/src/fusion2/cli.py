"""Command-line front end.

Exit status: 0 completed, 1 verification failed (``check``), 2 usage or
input error, 3 search budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .budget import BudgetExceeded, resolve_budget
from .fusion import FusionRule
from .gauge import are_equivalent
from .pentagon import Associator, pentagon_report
from .scalar import FieldError, parse_field
from .solver import NONEXISTENT, SOLUTIONS, brute_force_search, classify, random_search

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# (label, representative rules) in the order of the summary table
TABLE_ROWS = [
    ("m=1, n=0", [(1, 0)]),
    ("m>1, n=0", [(2, 0), (3, 0)]),
    ("m=0, n=1", [(0, 1)]),
    ("m=0, n>1", [(0, 2)]),
    ("m=n=1", [(1, 1)]),
    ("m>1, 2m>n^2", [(2, 1), (3, 2)]),
    ("m=n=2", [(2, 2)]),
]


class InputError(Exception):
    """Unreadable or malformed input file, with a location when known."""


def _locate(text: str, needle: str) -> tuple[int, int] | None:
    pos = text.find(needle)
    if pos < 0:
        return None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def load_associator(path: str) -> Associator:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}:1:1: expected a JSON object")
    try:
        return Associator.from_json(data, raw=True)
    except KeyError as exc:
        raise InputError(f"{path}:1:1: missing key {exc.args[0]!r}") from None
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        msg = str(exc)
        where = None
        for token in _quoted_tokens(msg):
            where = _locate(text, json.dumps(token)) or _locate(text, token)
            if where:
                break
        loc = f"{where[0]}:{where[1]}" if where else "1:1"
        raise InputError(f"{path}:{loc}: {msg}") from None


def _quoted_tokens(msg: str) -> list[str]:
    out = []
    for quote in ("'", '"'):
        parts = msg.split(quote)
        out += [parts[i] for i in range(1, len(parts) - 1, 2)]
    return out


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    field = parse_field(args.field)
    c = classify(FusionRule(args.m, args.n), field)
    _emit(args, c.to_json(), c.to_text() + f"\nsummary: {c.summary()}")
    return EXIT_OK


def cmd_check(args) -> int:
    a = load_associator(args.associator)
    rep = pentagon_report(a)
    ok = rep["ass4_ok"] and rep["biedenharn_elliot_ok"] and rep["block_system_ok"] \
        and rep["invertible"]
    lines = [f"rule: {a.rule}", f"field: {a.field}",
             f"invertible: {'yes' if rep['invertible'] else 'no'}"]
    for key, title in (("ass4", "pentagon on four objects"),
                       ("biedenharn_elliot", "6-j identity"),
                       ("block_system", "block equations")):
        res = rep[key]
        bad = [k for k, v in res.items() if not v]
        lines.append(f"{title}: {len(res) - len(bad)}/{len(res)} pass"
                     + (f" (failing: {', '.join(bad)})" if bad else ""))
    for label, v in rep["block_system"].items():
        lines.append(f"  ({label}) {'ok' if v else 'FAIL'}")
    lines.append("result: " + ("PASS" if ok else "FAIL"))
    _emit(args, {"associator": a.to_json(), **rep, "ok": ok}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_solve(args) -> int:
    field = parse_field(args.field)
    rule = FusionRule(args.m, args.n)
    if args.random is not None:
        res = random_search(rule, field, args.random, args.seed)
    else:
        res = brute_force_search(rule, field, include_singular=not args.no_singular,
                                 budget=resolve_budget(args.budget))
    res.found.sort(key=lambda f: f.associator.sort_key())
    lines = [f"rule: {rule}", f"field: {field}", f"mode: {res.mode} ({res.backend} backend)",
             f"searched: {res.searched}",
             f"invertible solutions: {len(res.solutions)}",
             f"singular solutions: {len(res.singular)}"]
    for f in res.found:
        if f.invertible:
            lines.append(f"  lambda1={f.associator.lam1.to_text_rows()} "
                         f"lambda2={f.associator.lam2.to_text_rows()}")
    _emit(args, res.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_gauge_equiv(args) -> int:
    a, b = load_associator(args.first), load_associator(args.second)
    res = are_equivalent(a, b, args.strategy, budget=args.budget)
    lines = [f"verdict: {res.verdict}", f"strategy: {res.strategy}", f"searched: {res.searched}"]
    if res.gauge is not None:
        g = res.gauge
        lines.append(f"gauge: alpha={g.alpha} n1={g.n1.to_text_rows()} n2={g.n2.to_text_rows()}")
    if res.note:
        lines.append(f"note: {res.note}")
    if res.system is not None:
        lines.append("system: " + json.dumps(res.system))
    _emit(args, res.to_json(), "\n".join(lines))
    return EXIT_OK


def table_rows(field_text: str) -> list[dict]:
    field = parse_field(field_text)
    rows = []
    for label, rules in TABLE_ROWS:
        results = [classify(FusionRule(m, n), field) for m, n in rules]
        rows.append({"row": label, "results": results})
    return rows


def _row_text(results) -> str:
    first = results[0]
    if all(r.verdict == NONEXISTENT for r in results):
        return "No (" + ", ".join(f"({r.rule.m},{r.rule.n}): {r.reason}" for r in results) + ")"
    if first.verdict == SOLUTIONS:
        text = first.summary()
        if first.field != (first.requested_field or first.field):
            text += f" over {first.field}"
        return text
    return first.summary()


def cmd_table(args) -> int:
    rows = table_rows(args.field)
    payload = {"field": args.field, "rows": []}
    lines = [f"field: {parse_field(args.field)}"]
    width = max(len(label) for label, _ in TABLE_ROWS)
    for row in rows:
        res = row["results"]
        payload["rows"].append({
            "row": row["row"],
            "summary": _row_text(res),
            "results": [{"rule": r.rule.to_json(), "verdict": r.verdict, "reason": r.reason,
                         "class_count": r.class_count if r.verdict == SOLUTIONS else None,
                         "classes": [c.name for c in r.classes],
                         "relations": [x.to_json() for x in r.relations],
                         "notes": r.notes} for r in res],
        })
        lines.append(f"{row['row']:<{width}}  {_row_text(res)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusion2", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="fusion2 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("classify", help="classify associators for a fusion rule")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--field", required=True, help="Q, Q[t^2=5], F5, F2[t^2+t+1], ...")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="verify an associator with all three pentagon forms")
    p.add_argument("--associator", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="brute-force or random search over a finite field")
    p.add_argument("--m", type=_nonneg, required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--budget", type=int, default=None,
                   help="maximum candidates (default: $FUSION2_BUDGET or 2^24)")
    p.add_argument("--random", type=_nonneg, default=None, metavar="COUNT",
                   help="sample COUNT random candidates instead of enumerating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-singular", action="store_true", help="drop singular solutions")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gauge-equiv", help="test two associators for gauge equivalence")
    p.add_argument("first", metavar="A")
    p.add_argument("second", metavar="B")
    p.add_argument("--strategy", choices=["exhaustive", "parametric-scaling"],
                   default="exhaustive")
    p.add_argument("--budget", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_gauge_equiv)

    p = sub.add_parser("table", help="evaluate every row of the summary table over a field")
    p.add_argument("--field", required=True)
    common(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except (FieldError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
