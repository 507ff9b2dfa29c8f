"""Getting to school: the same domain under two orderings of two desires.

The travel domain lets a student walk or call a taxi.  One desire favours
walking whenever both are possible, the other favours the taxi.  Putting one
before the other in a lexicographic chain flips the chosen plan.
"""

from __future__ import annotations

from _shared import banner, domain, prefs

from pplan import PlanQuery, enumerate_trajectories, load_domain, load_preferences, solve, weight
from pplan.planner import format_plan

theory = load_domain(domain("travel"))
query = PlanQuery(theory, 3)

banner("trajectories reaching the goal within 3 steps")
trajs = list(enumerate_trajectories(query))
for t in trajs[:6]:
    print("  ", " ; ".join(t.actions) or "(empty)")
print(f"   ... {len(trajs)} in total")

for name in ("travel_cost_time", "travel_time_cost"):
    decl = load_preferences(prefs(name), theory)
    result = solve(query, decl.root, explain=True)
    banner(f"{name}: optimize {decl.root_name}")
    print(format_plan(result.best))
    print(weight(result.best, decl.root).explain())
