"""Built-in preference patterns: shortest plans and cheapest plans.

``shortest_formula`` ranks plans by the first step at which the goal holds.
``cheapest_transform`` threads a running cost through the domain and
prefers low totals.  ``shortest_action_transform`` adds a ``stop`` action
and asks that ``stop`` happen as soon as the goal holds.  That last pattern
only forces stopping once the goal holds; it does not push the goal
earlier, so on the monkey domain it can return a longer plan than needed.
"""

from __future__ import annotations

from _shared import DATA, banner, domain

from pplan import PlanQuery, enumerate_trajectories, load_domain, solve
from pplan.patterns import NOOP, STOP, cheapest_transform, load_costs, plan_cost, shortest_action_transform, shortest_formula

for name, horizon in (("travel", 3), ("monkey", 6)):
    theory = load_domain(domain(name))
    costs = load_costs(DATA / "costs" / f"{name}.costs")
    trajs = list(enumerate_trajectories(PlanQuery(theory, horizon)))
    banner(f"{name}, horizon {horizon}")
    print(f"  shortest possible: {min(len(t) for t in trajs)} steps")

    best = solve(PlanQuery(theory, horizon), shortest_formula(horizon, theory.goal)).best
    print(f"  shortest_formula:  {len(best)} steps   {' ; '.join(best.actions)}")

    extended, desire = shortest_action_transform(theory)
    best = solve(PlanQuery(extended, horizon + 1), desire).best
    steps = [a for a in best.actions if a not in (STOP, NOOP)]
    print(f"  shortest_action:   {len(steps)} steps   {' ; '.join(steps)}")

    extended, pref = cheapest_transform(theory, costs, 0, max(costs.values()) * horizon)
    best = solve(PlanQuery(extended, horizon), pref).best
    cheapest = min(plan_cost(t, costs) for t in trajs)
    print(f"  cheapest:          cost {plan_cost(best, costs)} (minimum {cheapest})")
