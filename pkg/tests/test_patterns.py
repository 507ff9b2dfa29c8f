from __future__ import annotations

import pytest

from gen import DATA, shipped
from pplan.actions import TRUE, FluentLiteral, Lit, audit
from pplan.errors import CostOverflow, NameClash, NoPlan, ParseError
from pplan.planner import PlanQuery, enumerate_trajectories
from pplan.pp import Always, Atomic, Next, StateFormula
from pplan.patterns import (
    COST_OVERFLOW,
    ENDED,
    NOOP,
    STOP,
    check_cost_bound,
    cheapest_transform,
    load_costs,
    parse_costs,
    plan_cost,
    shortest_action_transform,
    shortest_formula,
)
from pplan.semantics import Comparison, compare_general
from pplan.solver import solve


def test_shortest_formula_shapes():
    goal = Lit(FluentLiteral("g"))
    assert shortest_formula(0, goal) == Atomic((StateFormula(goal),))
    p = shortest_formula(2, goal)
    assert len(p.chain) == 3
    assert p.chain[1].right == Next(StateFormula(goal))
    with pytest.raises(ValueError):
        shortest_formula(-1, goal)


def test_shortest_formula_picks_minimum_length():
    th = shipped("coffee")
    best = solve(PlanQuery(th, 3), shortest_formula(3, th.goal)).best
    shortest = min(len(t) for t in enumerate_trajectories(PlanQuery(th, 3)))
    assert len(best) == shortest == 1


def test_shortest_formula_unreachable_goal():
    th = shipped("travel").replace(goal=Lit(FluentLiteral("available_taxi(school)")))
    with pytest.raises(NoPlan):
        solve(PlanQuery(th, 1), shortest_formula(1, th.goal))


def test_shortest_action_transform_structure():
    th = shipped("travel")
    new, short = shortest_action_transform(th)
    assert new.actions[-2:] == (STOP, NOOP)
    assert new.fluents[-1] == ENDED
    not_ended = FluentLiteral(ENDED, False)
    for cond in new.exec:
        if cond.action in th.action_set or cond.action == STOP:
            assert not_ended in cond.body
    stop_conds = [c.body for c in new.exec if c.action == STOP]
    assert stop_conds == [(FluentLiteral("at(school)"), not_ended)]
    assert new.goal == Lit(FluentLiteral(ENDED))
    assert audit(new).ok
    assert isinstance(short, Always)


def test_shortest_action_on_travel():
    th = shipped("travel")
    new, short = shortest_action_transform(th)
    best = solve(PlanQuery(new, 4), short).best
    assert [a for a in best.actions if a not in (STOP, NOOP)] == ["walk(home,school)"]
    assert best.actions[1] == STOP


def test_shortest_action_goal_true_initially():
    th = shipped("travel").replace(goal=TRUE)
    new, short = shortest_action_transform(th)
    best = solve(PlanQuery(new, 3, post_goal_actions=False), short).best
    assert best.actions == (STOP,)
    padded = solve(PlanQuery(new, 3), short).best
    assert padded.actions[0] == STOP and set(padded.actions[1:]) <= {NOOP}


def test_shortest_action_name_clash():
    th = shipped("travel")
    new, _ = shortest_action_transform(th)
    with pytest.raises(NameClash):
        shortest_action_transform(new)


def test_cheapest_on_travel():
    th = shipped("travel")
    costs = load_costs(DATA / "costs" / "travel.costs")
    new, pref = cheapest_transform(th, costs, 0, 12)
    check_cost_bound(PlanQuery(new, 2))
    best = solve(PlanQuery(new, 2), pref).best
    assert best.actions == ("walk(home,school)",)
    assert audit(new).ok


def test_cheapest_all_zero_costs_are_indistinguishable():
    th = shipped("travel")
    new, pref = cheapest_transform(th, {"walk": 0, "call_taxi": 0, "take_taxi": 0}, 0, 0)
    assert len(pref.chain) == 1
    trajs = list(enumerate_trajectories(PlanQuery(new, 2)))
    assert all(compare_general(trajs[0], t, pref) is Comparison.INDISTINGUISHABLE for t in trajs)


def test_cheapest_overflow_detected():
    th = shipped("travel")
    new, _ = cheapest_transform(th, {"walk": 0, "call_taxi": 1, "take_taxi": 5}, 0, 3)
    with pytest.raises(CostOverflow):
        check_cost_bound(PlanQuery(new, 2))
    assert COST_OVERFLOW in new.fluents


def test_cost_table_validation():
    th = shipped("travel")
    with pytest.raises(ValueError, match="no cost"):
        cheapest_transform(th, {"walk": 1}, 0, 3)
    with pytest.raises(ValueError, match="unknown"):
        cheapest_transform(th, {"walk": 1, "call_taxi": 1, "take_taxi": 1, "fly": 2}, 0, 3)
    with pytest.raises(ValueError):
        cheapest_transform(th, {"walk": 1, "call_taxi": 1, "take_taxi": 1}, 4, 3)


def test_ground_cost_overrides_family():
    th = shipped("travel")
    costs = {"walk": 9, "walk(home,school)": 1, "call_taxi": 1, "take_taxi": 1}
    new, pref = cheapest_transform(th, costs, 0, 20)
    best = solve(PlanQuery(new, 2), pref).best
    assert plan_cost(best, costs) == 1


def test_parse_costs():
    text = "% travel\nwalk = 0\ncall_taxi: 1.\ntake_taxi(home, school) = 5  # ground\n"
    assert parse_costs(text) == {"walk": 0, "call_taxi": 1, "take_taxi(home,school)": 5}
    with pytest.raises(ParseError):
        parse_costs("walk 3")
    with pytest.raises(ParseError):
        parse_costs("walk = -1")
