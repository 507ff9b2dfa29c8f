"""Integer weights that respect the preference order.

Every preference tree gets a weight per trajectory and a bound that the
weight stays strictly below.  That headroom is what lets a chain give its
first element absolute priority.  Here we print the per-node breakdown for
a nested preference and then confirm on every pair of trajectories that
strictly preferred means strictly heavier.
"""

from __future__ import annotations

from _shared import banner, domain

from pplan import PlanQuery, enumerate_trajectories, load_domain, max_weight, parse_preference, weight
from pplan.weights import check_admissible

theory = load_domain(domain("coffee_taxi"))
pref = parse_preference(
    "(eventually(has_coffee) <| always(!occ(take_taxi(home,coffee_shop)))) & !!goal(at(school))",
    theory,
)
trajs = list(enumerate_trajectories(PlanQuery(theory, 4)))

banner(f"bound {max_weight(pref)}")
for t in trajs:
    print(f"  w={weight(t, pref).weight:3d}  {' ; '.join(t.actions)}")

banner("breakdown for the first trajectory")
print(weight(trajs[0], pref).explain())

banner("admissibility")
print(" ", check_admissible(trajs, pref))
