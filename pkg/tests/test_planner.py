from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_theory, shipped, trajectories_ref
from pplan.actions import holds
from pplan.errors import IndexOutOfRange, InvalidPlan, ParseError
from pplan.planner import (
    PlanQuery,
    Trajectory,
    count_trajectories,
    enumerate_trajectories,
    format_plan,
    parse_plan,
    replay,
    suffix,
)


def as_key(t: Trajectory):
    return tuple(s.literals for s in t.states), t.actions


def test_travel_length_two():
    th = shipped("travel")
    plans = [t.actions for t in enumerate_trajectories(PlanQuery(th, 2))]
    assert ("walk(home,school)",) in plans
    assert ("call_taxi(home)", "take_taxi(home,school)") in plans
    assert all(len(p) <= 2 for p in plans)


def test_prefixes_come_first():
    th = shipped("travel")
    order = [t.actions for t in enumerate_trajectories(PlanQuery(th, 4))]
    index = {p: i for i, p in enumerate(order)}
    assert len(index) == len(order)
    for p, i in index.items():
        for k in range(len(p)):
            if p[:k] in index:
                assert index[p[:k]] < i


def test_post_goal_actions_off_stops_at_goal():
    th = shipped("travel")
    q = PlanQuery(th, 4, post_goal_actions=False)
    for t in enumerate_trajectories(q):
        assert not any(holds(s, th.goal) for s in t.states[:-1])
    assert count_trajectories(q) < count_trajectories(PlanQuery(th, 4))


def test_negative_length_rejected():
    with pytest.raises(ValueError):
        PlanQuery(shipped("travel"), -1)


def test_suffix_bounds():
    th = shipped("travel")
    t = replay(th, ["call_taxi(home)", "take_taxi(home,school)"])
    assert suffix(t, 2).actions == ()
    assert suffix(t, 1).actions == ("take_taxi(home,school)",)
    with pytest.raises(IndexOutOfRange):
        suffix(t, 3)
    with pytest.raises(IndexOutOfRange):
        suffix(t, -1)


def test_replay_errors():
    th = shipped("travel")
    with pytest.raises(InvalidPlan):
        replay(th, ["take_taxi(home,school)"])
    with pytest.raises(InvalidPlan):
        replay(th, ["fly(home,school)"])


def test_trajectory_validate():
    th = shipped("travel")
    good = replay(th, ["walk(home,school)"])
    good.validate(th)
    bad = Trajectory((good.states[0], good.states[0]), good.actions)
    with pytest.raises(InvalidPlan):
        bad.validate(th)
    with pytest.raises(ValueError):
        Trajectory(good.states, ())


def test_plan_text_round_trip():
    th = shipped("coffee")
    t = replay(th, ["walk(home,coffee_shop)", "buy_coffee", "walk(coffee_shop,school)"])
    text = format_plan(t)
    assert "occ(buy_coffee,1)." in text
    assert "+has_coffee" in text
    assert parse_plan(text) == list(t.actions)
    assert parse_plan(format_plan(t, diffs=False)) == list(t.actions)


def test_parse_plan_tolerates_spacing_and_order():
    text = "occ( walk(home, school) , 1 ).\n% note\nocc(call_taxi(home),0)\n"
    assert parse_plan(text) == ["call_taxi(home)", "walk(home,school)"]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("occ(a,0).\nocc(b,0).", InvalidPlan),
        ("occ(a,1).", InvalidPlan),
        ("do(a,0).", ParseError),
    ],
)
def test_parse_plan_errors(text, exc):
    with pytest.raises(exc):
        parse_plan(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_enumeration_matches_breadth_first_reference(seed, post_goal):
    rng = random.Random(seed)
    th = random_theory(rng, n_fluents=3, n_actions=rng.randint(2, 3))
    horizon = rng.randint(0, 3)
    got = [as_key(t) for t in enumerate_trajectories(PlanQuery(th, horizon, post_goal))]
    assert len(got) == len(set(got))
    assert set(got) == trajectories_ref(th, horizon, post_goal)
