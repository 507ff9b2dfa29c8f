"""Ready-made preferences: shortest plans and cheapest plans.

Two of the three constructions rewrite the action theory before planning.
They return the rewritten theory together with the preference to optimize.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Mapping

from .actions import (
    FALSE,
    ActionTheory,
    DynamicLaw,
    ExecCondition,
    FluentLiteral,
    Formula,
    Lit,
    StaticLaw,
    to_dnf,
)
from .errors import CostOverflow, NameClash, ParseError
from .planner import PlanQuery, Trajectory, enumerate_trajectories
from .pp import Always, Atomic, Desire, Goal, Next, StateFormula, conjoin, d_not, enabled_group, normalize_formula

__all__ = [
    "shortest_formula",
    "shortest_action_transform",
    "cheapest_transform",
    "plan_cost",
    "check_cost_bound",
    "parse_costs",
    "load_costs",
    "STOP",
    "NOOP",
    "ENDED",
]

STOP, NOOP, ENDED = "stop", "noop", "ended"
COST_FAMILY = "scost"
COST_OVERFLOW = "scost_overflow"


def _next_power(d: Desire, i: int) -> Desire:
    for _ in range(i):
        d = Next(d)
    return d


def shortest_formula(n: int, goal: Formula) -> Atomic:
    """Chain that ranks trajectories by the first index at which ``goal`` holds.

    Element ``i`` says ``goal`` fails at indexes ``0..i-1`` and holds at ``i``.
    """
    if n < 0:
        raise ValueError("horizon must be non-negative")
    base = StateFormula(normalize_formula(goal))
    chain = []
    for i in range(n + 1):
        misses = [d_not(_next_power(base, j)) for j in range(i)]
        chain.append(conjoin([*misses, _next_power(base, i)]))
    return Atomic(tuple(chain))


def _clash(theory: ActionTheory, names: Iterable[str]) -> None:
    taken = theory.fluent_set | theory.action_set
    for name in names:
        if name in taken:
            raise NameClash(f"{name!r} is already declared in the theory")


def _disjuncts(formula: Formula) -> list[tuple[FluentLiteral, ...]]:
    return [] if formula == FALSE else to_dnf(formula)


def shortest_action_transform(theory: ActionTheory) -> tuple[ActionTheory, Desire]:
    """Add ``stop``/``noop``/``ended`` and return the desire preferring early stops.

    ``stop`` is executable exactly where the goal holds and sets ``ended``;
    afterwards only ``noop`` is executable.  The new goal is ``ended``, so
    every plan closes with ``stop``.
    """
    _clash(theory, (STOP, NOOP, ENDED))
    not_ended = FluentLiteral(ENDED, False)
    ended = FluentLiteral(ENDED)
    exec_conds = [ExecCondition(c.action, (*c.body, not_ended)) for c in theory.exec]
    exec_conds += [ExecCondition(STOP, (*body, not_ended)) for body in _disjuncts(theory.goal)]
    exec_conds.append(ExecCondition(NOOP, (ended,)))
    dynamic = (*theory.dynamic, DynamicLaw(STOP, ended), DynamicLaw(NOOP, ended))
    new = theory.replace(
        fluents=(*theory.fluents, ENDED),
        actions=(*theory.actions, STOP, NOOP),
        dynamic=dynamic,
        exec=tuple(exec_conds),
        initial=theory.initial | {not_ended},
        goal=Lit(ended),
    )
    short = Always(enabled_group((STOP, NOOP), theory.actions, new))
    return new, short


# -- cheapest plan -----------------------------------------------------------------


def _cost_fluent(v: int) -> str:
    return f"{COST_FAMILY}({v})"


def _resolve_costs(theory: ActionTheory, costs: Mapping[str, int]) -> dict[str, int]:
    out = {}
    for action in theory.actions:
        family = action.partition("(")[0]
        if action in costs:
            c = costs[action]
        elif family in costs:
            c = costs[family]
        else:
            raise ValueError(f"no cost given for action {action}")
        if not isinstance(c, int) or c < 0:
            raise ValueError(f"cost of {action} must be a non-negative integer, got {c!r}")
        out[action] = c
    unused = set(costs) - set(out) - {a.partition("(")[0] for a in theory.actions}
    if unused:
        raise ValueError(f"costs given for unknown actions: {sorted(unused)}")
    return out


def cheapest_transform(
    theory: ActionTheory, costs: Mapping[str, int], low: int, high: int
) -> tuple[ActionTheory, Atomic]:
    """Track the accumulated cost in a fluent family and prefer low totals.

    ``costs`` may name ground actions or action families.  Values run over
    ``0..high``; a step that would exceed ``high`` sets ``scost_overflow``,
    which :func:`check_cost_bound` reports.
    """
    if not 0 <= low <= high:
        raise ValueError("need 0 <= low <= high")
    _clash(theory, [_cost_fluent(v) for v in range(high + 1)] + [COST_OVERFLOW])
    table = _resolve_costs(theory, costs)
    values = range(high + 1)
    cost_fluents = [_cost_fluent(v) for v in values]
    static = list(theory.static)
    for i in values:
        for j in values:
            if i != j:
                static.append(StaticLaw(FluentLiteral(cost_fluents[j], False), (FluentLiteral(cost_fluents[i]),)))
    dynamic = list(theory.dynamic)
    overflow = FluentLiteral(COST_OVERFLOW)
    for action in theory.actions:
        c = table[action]
        for v in values:
            before = FluentLiteral(cost_fluents[v])
            if v + c <= high:
                dynamic.append(DynamicLaw(action, FluentLiteral(cost_fluents[v + c]), (before,)))
            else:
                dynamic.append(DynamicLaw(action, overflow, (before,)))
    new = theory.replace(
        fluents=(*theory.fluents, *cost_fluents, COST_OVERFLOW),
        static=tuple(static),
        dynamic=tuple(dynamic),
        initial=theory.initial | {FluentLiteral(cost_fluents[0])},
    )
    pref = Atomic(tuple(Goal(Lit(FluentLiteral(cost_fluents[v]))) for v in range(low, high + 1)))
    return new, pref


def plan_cost(t: Trajectory, costs: Mapping[str, int]) -> int:
    """Sum of action costs along ``t``; keys may be ground actions or families."""
    total = 0
    for a in t.actions:
        total += costs[a] if a in costs else costs[a.partition("(")[0]]
    return total


def check_cost_bound(query: PlanQuery) -> None:
    """Raise :class:`CostOverflow` if some enumerated trajectory exceeds the bound."""
    flag = FluentLiteral(COST_OVERFLOW)
    for t in enumerate_trajectories(query):
        if any(flag in s for s in t.states):
            raise CostOverflow(f"accumulated cost exceeds the bound on {' '.join(t.actions)}")


_COST_LINE = re.compile(r"^\s*([A-Za-z_][\w(),\s]*?)\s*[:=]\s*(-?\d+)\s*\.?\s*$")


def parse_costs(text: str, source: str = "<costs>") -> dict[str, int]:
    """Parse ``action = cost`` lines; ``%`` and ``#`` start comments."""
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = re.split(r"[%#]", raw, maxsplit=1)[0]
        if not line.strip():
            continue
        m = _COST_LINE.match(line)
        if not m:
            raise ParseError("expected 'action = cost'", lineno, 1, source)
        name = re.sub(r"\s+", "", m.group(1))
        value = int(m.group(2))
        if value < 0:
            raise ParseError(f"negative cost for {name}", lineno, 1, source)
        out[name] = value
    return out


def load_costs(path: str | Path) -> dict[str, int]:
    return parse_costs(Path(path).read_text(), str(path))
