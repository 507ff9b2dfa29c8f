"""Conjunction and disjunction of preferences can disagree.

Two coffee trips: walk both legs, or walk to the shop and ride to school.
They tie on ``time`` and the first wins on ``cost``.  ``time & cost`` asks
for a win on both, so the pair is incomparable; ``time | cost`` accepts a
win on one side with a tie on the other.  Dominance mode then lists every
plan that no other plan beats.
"""

from __future__ import annotations

from _shared import DATA, banner, domain, prefs

from pplan import PlanQuery, compare, load_domain, load_preferences, replay, solve
from pplan.planner import parse_plan

theory = load_domain(domain("coffee_taxi"))
decl = load_preferences(prefs("coffee_time_cost"), theory)
plans = {}
for name in ("coffee_walk_walk", "coffee_walk_taxi"):
    path = DATA / "plans" / f"{name}.plan"
    plans[name] = replay(theory, parse_plan(path.read_text(), str(path)))

banner("pairwise comparison")
a, b = plans["coffee_walk_walk"], plans["coffee_walk_taxi"]
for label in ("time", "cost", "both", "either"):
    p = decl.prefs.get(label) or decl.desires[label]
    print(f"  {label:7s} {compare(a, b, p).value}")

banner("undominated plans under 'both' at length 3")
result = solve(PlanQuery(theory, 3), decl.prefs["both"], mode="dominance")
for t in result.maximal:
    print("  ", " ; ".join(t.actions))
