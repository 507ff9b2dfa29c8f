"""Command-line frontend: ``plan``, ``compare``, ``emit`` and ``check``.

Exit codes: 0 success, 1 invalid input (syntax, unknown names, bad plans,
inconsistent theories, I/O), 2 no trajectory reaches the goal.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .actions import audit
from .asp import emit_program
from .domain import load_domain
from .errors import NoPlan, PPlanError
from .patterns import (
    NOOP,
    STOP,
    check_cost_bound,
    cheapest_transform,
    load_costs,
    shortest_action_transform,
    shortest_formula,
)
from .planner import PlanQuery, Trajectory, format_plan, parse_plan, replay
from .pp import Atomic, Chain, as_preference, format_preference
from .pp_parser import load_preferences
from .semantics import compare_atomic_detail, compare_general
from .solver import solve

EXIT_OK, EXIT_INPUT, EXIT_NO_PLAN = 0, 1, 2
DEFAULT_LENGTH = 5
LENGTH_ENV = "PPLAN_LENGTH"


def _default_length() -> int:
    raw = os.environ.get(LENGTH_ENV)
    if raw is None:
        return DEFAULT_LENGTH
    try:
        value = int(raw)
    except ValueError:
        raise PPlanError(f"{LENGTH_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise PPlanError(f"{LENGTH_ENV} must be non-negative")
    return value


def _select(decl, name: str | None):
    if name is None:
        return decl.root, decl.root_name
    if name in decl.prefs:
        return decl.prefs[name], name
    if name in decl.desires:
        return as_preference(decl.desires[name]), name
    raise PPlanError(f"no preference or desire named {name!r}")


def _strip_padding(t: Trajectory) -> Trajectory:
    keep = [i for i, a in enumerate(t.actions) if a not in (STOP, NOOP)]
    if len(keep) == len(t.actions):
        return t
    n = len(keep)
    # stop and noop change nothing but the bookkeeping fluent
    return Trajectory(t.states[: n + 1], tuple(t.actions[i] for i in keep))


def cmd_plan(args: argparse.Namespace) -> int:
    theory = load_domain(args.domain)
    length = args.length if args.length is not None else _default_length()
    pref = None
    label = None
    if args.prefs:
        decl = load_preferences(args.prefs, theory)
        pref, label = _select(decl, args.select)
    pattern_pref = None
    if args.pattern == "shortest-formula":
        pattern_pref = shortest_formula(length, theory.goal)
    elif args.pattern == "shortest-action":
        theory, desire = shortest_action_transform(theory)
        pattern_pref = as_preference(desire)
        length += 1  # room for the closing stop
    elif args.pattern == "cheapest":
        if not args.costs:
            raise PPlanError("--pattern cheapest needs --costs FILE")
        costs = load_costs(args.costs)
        high = args.max_cost if args.max_cost is not None else max(costs.values(), default=0) * length
        theory, pattern_pref = cheapest_transform(theory, costs, args.min_cost, high)
        check_cost_bound(PlanQuery(theory, length, not args.no_post_goal_actions))
    if pattern_pref is not None:
        pref = pattern_pref if pref is None else Chain((pattern_pref, as_preference(pref)))
        label = args.pattern if label is None else f"{args.pattern} <| {label}"
    if pref is None:
        raise PPlanError("give a preference file or --pattern")
    query = PlanQuery(theory, length, post_goal_actions=not args.no_post_goal_actions)
    solution = solve(query, pref, mode=args.mode, explain=args.explain)
    best = _strip_padding(solution.best)
    out = [f"% preference {label or format_preference(pref)}; length bound {length}; mode {args.mode}"]
    out.append(format_plan(best).rstrip("\n"))
    report = solution.report
    out.append(f"% weight {report.weight} of bound {report.max_bound}")
    if args.mode == "dominance":
        out.append(f"% {len(solution.maximal)} undominated of {solution.explored} trajectories")
    if args.explain and report.nodes:
        out += [f"% {line}" for line in report.explain().splitlines()]
    print("\n".join(out))
    return EXIT_OK


def _read_plan(theory, path: str) -> Trajectory:
    text = Path(path).read_text(encoding="utf-8")
    return replay(theory, parse_plan(text, path))


def cmd_compare(args: argparse.Namespace) -> int:
    theory = load_domain(args.domain)
    decl = load_preferences(args.prefs, theory)
    pref, _ = _select(decl, args.select)
    a = _read_plan(theory, args.plan_a)
    b = _read_plan(theory, args.plan_b)
    if isinstance(pref, Atomic):
        result, index = compare_atomic_detail(a, b, pref)
        print(result.value)
        if index is not None:
            print(f"decided by chain element {index} (0-based): {format_preference(pref.chain[index])}")
    else:
        print(compare_general(a, b, pref).value)
    return EXIT_OK


def cmd_emit(args: argparse.Namespace) -> int:
    theory = load_domain(args.domain)
    decl = load_preferences(args.prefs, theory)
    pref, _ = _select(decl, args.select)
    length = args.length if args.length is not None else _default_length()
    sources = {
        "domain": Path(args.domain).read_text(encoding="utf-8"),
        "preferences": Path(args.prefs).read_text(encoding="utf-8"),
    }
    text = emit_program(theory, pref, length, sources).render()
    if args.out:
        Path(args.out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    theory = load_domain(args.domain)
    print(f"{args.domain}: {len(theory.fluents)} fluents, {len(theory.actions)} actions")
    if args.prefs:
        decl = load_preferences(args.prefs, theory)
        print(f"{args.prefs}: {len(decl.desires)} desires, {len(decl.prefs)} preferences, optimize {decl.root_name}")
    if args.audit or args.exhaustive:
        report = audit(theory, exhaustive=args.exhaustive)
        print(report)
        if not report.ok:
            return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pplan", description="Planning with trajectory preferences.")
    parser.add_argument("--version", action="version", version=f"pplan {__version__}")
    parser.add_argument("--seed", type=int, default=None, help="accepted for compatibility; results are deterministic")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="print a most preferred plan")
    p.add_argument("domain")
    p.add_argument("prefs", nargs="?")
    p.add_argument("--length", type=int, help=f"horizon (default ${LENGTH_ENV} or {DEFAULT_LENGTH})")
    p.add_argument("--mode", choices=("weight", "dominance"), default="weight")
    p.add_argument("--explain", action="store_true", help="print the weight of every preference node")
    p.add_argument("--no-post-goal-actions", action="store_true", help="stop extending a trajectory once the goal holds")
    p.add_argument("--pattern", choices=("shortest-formula", "shortest-action", "cheapest"))
    p.add_argument("--costs", help="action costs for --pattern cheapest")
    p.add_argument("--min-cost", type=int, default=0)
    p.add_argument("--max-cost", type=int)
    p.add_argument("--select", help="optimize this named preference instead")
    p.set_defaults(func=cmd_plan)

    c = sub.add_parser("compare", help="compare two plan files")
    c.add_argument("domain")
    c.add_argument("prefs")
    c.add_argument("plan_a")
    c.add_argument("plan_b")
    c.add_argument("--select")
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("emit", help="write the logic program")
    e.add_argument("domain")
    e.add_argument("prefs")
    e.add_argument("--length", type=int)
    e.add_argument("--out")
    e.add_argument("--select")
    e.set_defaults(func=cmd_emit)

    k = sub.add_parser("check", help="parse, resolve and optionally audit")
    k.add_argument("domain")
    k.add_argument("prefs", nargs="?")
    k.add_argument("--audit", action="store_true", help="check reachable states")
    k.add_argument("--exhaustive", action="store_true", help="check every state")
    k.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoPlan as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO_PLAN
    except (PPlanError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
