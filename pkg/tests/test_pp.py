from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import DATA, random_preference, random_theory, shipped
from pplan.actions import FALSE, TRUE, FAnd, FluentLiteral, FNot, FOr, Lit
from pplan.errors import ParseError, ResolutionError, TooManyDesires, UnresolvedAction, UnresolvedFluent
from pplan.pp import (
    Always,
    And,
    Atomic,
    Chain,
    Conj,
    Disj,
    Eventually,
    Goal,
    Neg,
    Next,
    Not,
    Occ,
    Or,
    StateFormula,
    Until,
    ch,
    conjoin,
    enabled_desire,
    executable_formula,
    format_preference,
    make_chain,
    maxim,
    normalize_desire,
    preference_desires,
)
from pplan.pp_parser import load_preferences, parse_desire, parse_preference, parse_preference_file

TRAVEL = shipped("travel")


def lit(name, positive=True):
    return Lit(FluentLiteral(name, positive))


def sf(name, positive=True):
    return StateFormula(lit(name, positive))


def canonical(p):
    """What parsing the printed form of ``p`` is expected to give back."""
    if isinstance(p, Atomic):
        return Atomic(tuple(normalize_desire(d) for d in p.chain))
    if isinstance(p, Conj):
        return Conj(canonical(p.left), canonical(p.right))
    if isinstance(p, Disj):
        return Disj(canonical(p.left), canonical(p.right))
    if isinstance(p, Neg):
        return Neg(canonical(p.body))
    return make_chain([canonical(x) for x in p.parts])


def test_fluent_only_connectives_collapse():
    d = parse_desire("has_money && !at(home)", TRAVEL)
    assert d == StateFormula(FAnd((lit("has_money"), FNot(lit("at(home)")))))
    assert parse_desire("-at(home)", TRAVEL) == sf("at(home)", False)
    assert parse_desire("true", TRAVEL) == StateFormula(TRUE)


def test_temporal_operators():
    d = parse_desire("until(has_money, next(occ(walk(home,school))))", TRAVEL)
    assert d == Until(sf("has_money"), Next(Occ("walk(home,school)")))
    d = parse_desire("always(eventually(goal(at(school))))", TRAVEL)
    assert d == Always(Eventually(Goal(lit("at(school)"))))


def test_desire_precedence():
    d = parse_desire("occ(walk(home,school)) || has_money && occ(call_taxi(home))", TRAVEL)
    assert d == Or(Occ("walk(home,school)"), And(sf("has_money"), Occ("call_taxi(home)")))
    d = parse_desire("!occ(walk(home,school)) && has_money", TRAVEL)
    assert d == And(Not(Occ("walk(home,school)")), sf("has_money"))
    d = parse_desire("occ(walk(home,school)) && has_money && occ(call_taxi(home))", TRAVEL)
    assert d == And(And(Occ("walk(home,school)"), sf("has_money")), Occ("call_taxi(home)"))


def test_preference_precedence():
    p = parse_preference("has_money & at(home) | !!at(school) <| occ(walk(home,school))", TRAVEL)
    a, b, c = (Atomic((sf(x),)) for x in ("has_money", "at(home)", "at(school)"))
    assert p == Chain((Disj(Conj(a, b), Neg(c)), Atomic((Occ("walk(home,school)"),))))


def test_chain_of_desires_is_atomic():
    p = parse_preference("has_money <| at(home) <| at(school)", TRAVEL)
    assert p == Atomic((sf("has_money"), sf("at(home)"), sf("at(school)")))


def test_not_keyword_alias():
    assert parse_desire("not has_money", TRAVEL) == parse_desire("!has_money", TRAVEL)


def test_strong_and_weak_sugar():
    assert parse_desire("has_money < at(home)", TRAVEL) == StateFormula(
        FAnd((lit("has_money"), FNot(lit("at(home)"))))
    )
    assert parse_desire("has_money <w at(home)", TRAVEL) == StateFormula(
        FOr((lit("has_money"), FNot(lit("at(home)"))))
    )


def test_enabled_sugar_expands_with_executability():
    d = parse_desire("walk(home,school) <e call_taxi(home)", TRAVEL)
    assert d == enabled_desire("walk(home,school)", "call_taxi(home)", TRAVEL)
    both = FAnd((executable_formula(TRAVEL, "walk(home,school)"), executable_formula(TRAVEL, "call_taxi(home)")))
    assert d == Or(StateFormula(FNot(both)), And(Occ("walk(home,school)"), Not(Occ("call_taxi(home)"))))


def test_enabled_group_is_conjunction_of_pairs():
    d = parse_desire("walk(home,school) <e (call_taxi(home) || take_taxi(home,school))", TRAVEL)
    assert d == conjoin(
        [
            enabled_desire("walk(home,school)", "call_taxi(home)", TRAVEL),
            enabled_desire("walk(home,school)", "take_taxi(home,school)", TRAVEL),
        ]
    )


def test_parametric_enabled_over_constants():
    d = parse_desire("take_taxi <e walk over {home, school}", TRAVEL)
    assert d == Or(
        enabled_desire("take_taxi(home,school)", "walk(home,school)", TRAVEL),
        enabled_desire("take_taxi(school,home)", "walk(school,home)", TRAVEL),
    )


def test_action_without_conditions_is_never_executable():
    th = random_theory(random.Random(3))
    for a in th.actions:
        if not any(c.action == a for c in th.exec):
            assert executable_formula(th, a) == FALSE


def test_before_builtin():
    d = parse_desire("before(has_money, at(school))", TRAVEL)
    assert isinstance(d, And)
    assert isinstance(d.right, Until)


def test_ch_and_maxim():
    ds = [sf("a"), sf("b"), sf("c")]
    c = ch(ds)
    assert c.chain[-1] == sf("c")
    assert c.chain[0] == StateFormula(FAnd((FAnd((lit("a"), lit("b"))), lit("c"))))
    m = maxim(ds)
    assert len(preference_desires(m)) == 3 * 6
    with pytest.raises(TooManyDesires):
        maxim([sf(f"x{i}") for i in range(7)])
    with pytest.raises(TooManyDesires):
        maxim([])


def test_maxim_builtin_in_preference_file():
    decl = parse_preference_file("pref m = maxim(has_money, at(home)). optimize m.", TRAVEL)
    assert decl.root == maxim([sf("has_money"), sf("at(home)")])


def test_unknown_names_are_located():
    with pytest.raises(UnresolvedFluent) as info:
        parse_preference("\n  flying", TRAVEL, "p.pref")
    assert (info.value.line, info.value.column) == (2, 3)
    with pytest.raises(UnresolvedAction):
        parse_desire("occ(fly(home))", TRAVEL)
    with pytest.raises(UnresolvedFluent, match="is an action"):
        parse_desire("walk(home,school)", TRAVEL)


def test_unresolved_errors_are_resolution_errors():
    assert issubclass(UnresolvedFluent, ResolutionError)
    assert issubclass(UnresolvedAction, ResolutionError)


def test_preference_inside_desire_rejected():
    with pytest.raises(ResolutionError, match="inside a desire"):
        parse_desire("always(has_money & at(home))", TRAVEL)


def test_syntax_errors():
    with pytest.raises(ParseError):
        parse_preference("has_money &&", TRAVEL)
    with pytest.raises(ParseError):
        parse_desire("until(has_money)", TRAVEL)
    with pytest.raises(ParseError):
        parse_preference_file("desire x = has_money", TRAVEL)


def test_file_structure_errors():
    with pytest.raises(ResolutionError, match="declared twice"):
        parse_preference_file("desire x = has_money. desire x = at(home). optimize x.", TRAVEL)
    with pytest.raises(ResolutionError, match="optimize"):
        parse_preference_file("desire x = has_money.", TRAVEL)
    with pytest.raises(ResolutionError, match="fluent or action"):
        parse_preference_file("desire has_money = at(home). optimize has_money.", TRAVEL)


def test_semicolon_terminator():
    decl = parse_preference_file("desire x = has_money; optimize x;", TRAVEL)
    assert decl.root == Atomic((sf("has_money"),))
    assert decl.root_name == "x"


def test_shipped_travel_preferences():
    decl = load_preferences(DATA / "prefs" / "travel_cost_time.pref", TRAVEL)
    assert set(decl.desires) >= {"cost", "time"}
    assert decl.root == Atomic((decl.desires["cost"], decl.desires["time"]))


def test_make_chain_shapes():
    a, b = sf("a"), sf("b")
    assert make_chain([a]) == Atomic((a,))
    assert make_chain([a, b]) == Atomic((a, b))
    p = Conj(Atomic((a,)), Atomic((b,)))
    assert make_chain([p, a]) == Chain((p, Atomic((a,))))
    with pytest.raises(ValueError):
        make_chain([])


def test_printing_examples():
    p = parse_preference("!!(has_money <| at(home)) | occ(walk(home,school))", TRAVEL)
    assert format_preference(p) == "!!(has_money <| at(home)) | occ(walk(home,school))"
    assert format_preference(parse_desire("!(!has_money)", TRAVEL)) == "!(!has_money)"


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_round_trip(seed):
    rng = random.Random(seed)
    th = random_theory(rng)
    p = random_preference(rng, th, depth=rng.randint(1, 4))
    text = format_preference(p)
    parsed = parse_preference(text, th)
    assert parsed == canonical(p)
    assert parse_preference(format_preference(parsed), th) == parsed


def test_desire_constructors_preserve_constants():
    assert normalize_desire(And(StateFormula(TRUE), StateFormula(FALSE))) == StateFormula(FAnd((TRUE, FALSE)))
