from __future__ import annotations

import pytest

from gen import DATA, SHIPPED, shipped
from pplan.actions import FAnd, FluentLiteral, FNot, FOr, Lit, StaticLaw, audit, initial_state
from pplan.domain import ground, load_domain, parse_domain
from pplan.errors import EmptySort, ParseError, ResolutionError, UnboundVariable

TINY = """
sort place = {a, b}.
fluent at(place), lit.
action go(place).
caused -at(P2) if at(P1), P1 != P2.
go(P) causes at(P).
go(P) executable_if -at(P).
initially at(a).
goal at(b) & !lit.
"""


def build(text: str):
    return ground(parse_domain(text, "tiny.dom"))


def test_grounding_expands_sorts_in_declaration_order():
    th = build(TINY)
    assert th.fluents == ("at(a)", "at(b)", "lit")
    assert th.actions == ("go(a)", "go(b)")
    assert StaticLaw(FluentLiteral("at(b)", False), (FluentLiteral("at(a)"),)) in th.static
    assert len(th.static) == 2
    assert th.goal == FAnd((Lit(FluentLiteral("at(b)")), _not_lit("lit")))


def _not_lit(name):
    return FNot(Lit(FluentLiteral(name)))


def test_initial_state_of_tiny_domain():
    s0 = initial_state(build(TINY))
    assert s0.positives == ("at(a)",)


def test_numeric_sorts_and_equality_constraints():
    th = build(
        """
        sort n = 0..2.
        fluent v(n).
        action inc(n).
        inc(N) causes v(M) if v(N), M != N.
        inc(N) executable_if v(N).
        """
    )
    assert th.fluents == ("v(0)", "v(1)", "v(2)")
    assert len(th.dynamic) == 6


def test_disjunctive_goal_and_constants():
    th = build("fluent p, q. action x. x causes p. goal p | q.")
    assert th.goal == FOr((Lit(FluentLiteral("p")), Lit(FluentLiteral("q"))))
    assert build("fluent p. goal true.").goal.value is True


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_domain("fluent p.\naction x\nx causes p.", "bad.dom")
    err = info.value
    assert err.source == "bad.dom"
    assert err.line in (2, 3)
    assert str(err).startswith("bad.dom:")


def test_unknown_fluent_is_reported_with_line():
    with pytest.raises(ResolutionError) as info:
        build("fluent p.\naction x.\nx causes q.")
    assert info.value.line == 3
    assert "q" in str(info.value)


def test_action_used_as_fluent_hint():
    with pytest.raises(ResolutionError, match="is an action"):
        build("fluent p. action x. x causes x.")


def test_wrong_arity():
    with pytest.raises(ResolutionError, match="expects 1"):
        build("sort s = {a}. fluent p(s). action x. x causes p.")


def test_constant_of_wrong_sort():
    with pytest.raises(ResolutionError, match="not of sort"):
        build("sort s = {a}. fluent p(s). action x. x causes p(b).")


def test_empty_and_undeclared_sorts():
    with pytest.raises(EmptySort):
        build("sort s = {}. fluent p(s).")
    with pytest.raises(EmptySort):
        build("fluent p(t).")


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        build("fluent p. action x. x causes p if X != a.")


def test_duplicate_goal_rejected():
    with pytest.raises(ParseError):
        parse_domain("fluent p. goal p. goal p.")


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_domains_load(name):
    th = shipped(name)
    assert th.fluents and th.actions
    assert audit(th).ok


def test_travel_shape():
    th = shipped("travel")
    assert th.actions == (
        "walk(home,home)",
        "walk(home,school)",
        "walk(school,home)",
        "walk(school,school)",
        "call_taxi(home)",
        "call_taxi(school)",
        "take_taxi(home,home)",
        "take_taxi(home,school)",
        "take_taxi(school,home)",
        "take_taxi(school,school)",
    )
    assert initial_state(th).positives == ("at(home)", "has_money", "road(home,school)", "road(school,home)")


def test_monkey_size():
    th = shipped("monkey")
    assert len(th.fluents) == 10
    assert len(th.actions) == 25


def test_load_domain_accepts_text_override(tmp_path):
    th = load_domain(tmp_path / "virtual.dom", text=TINY)
    assert th.actions == ("go(a)", "go(b)")
    assert (DATA / "domains" / "travel.dom").exists()
