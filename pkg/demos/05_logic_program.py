"""The same problem as a logic program.

``emit_program`` writes a plain lparse-style program: a fixed-length
planning encoding, rules deciding which named desires hold from which
step, and weight rules with a maximize statement.  For a fixed trajectory
the satisfaction part is stratified, so it can be evaluated bottom-up here
and compared with the direct semantics.
"""

from __future__ import annotations

from _shared import banner, domain, prefs

from pplan import PlanQuery, enumerate_trajectories, load_domain, load_preferences
from pplan.asp import Atom, AspProgram, DesireTable, emit_program, emit_sat_rules, stratified_eval, trajectory_facts
from pplan.semantics import satisfaction_vector

theory = load_domain(domain("travel"))
decl = load_preferences(prefs("travel_cost_time"), theory)

banner("program excerpt")
text = emit_program(theory, decl.root, 2).render()
lines = text.splitlines()
for line in lines[:12]:
    print(line if len(line) <= 96 else line[:93] + "...")
print(f"   ... {len(lines)} lines")

banner("bottom-up evaluation against direct satisfaction")
desire = decl.desires["cost"]
for t in enumerate_trajectories(PlanQuery(theory, 2)):
    table = DesireTable()
    root = table.desire(desire)
    program = AspProgram()
    program.add_facts(table.facts)
    program.add_facts(trajectory_facts(t))
    program.extend(emit_sat_rules(table, len(t.actions)))
    model = stratified_eval(program)
    from_program = [Atom("satisfy", (root, i)) in model for i in range(len(t.actions) + 1)]
    direct = list(satisfaction_vector(t, desire))
    mark = "agree" if from_program == direct else "DIFFER"
    print(f"  {mark}  {direct}  {' ; '.join(t.actions)}")
