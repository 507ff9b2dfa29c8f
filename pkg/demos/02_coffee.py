"""Coffee on the way, and what happens without money.

With money the best plan detours through the coffee shop.  Without money
``buy_coffee`` is never executable, so the preference simply cannot be met
and the planner still returns a plan that reaches school.
"""

from __future__ import annotations

from _shared import banner, domain, prefs

from pplan import PlanQuery, load_domain, load_preferences, solve
from pplan.planner import format_plan

for name in ("coffee", "coffee_no_money"):
    theory = load_domain(domain(name))
    decl = load_preferences(prefs("coffee"), theory)
    result = solve(PlanQuery(theory, 4), decl.root, explain=True)
    banner(name)
    print(format_plan(result.best))
    print(f"weight {result.report.weight} of bound {result.report.max_bound}")
