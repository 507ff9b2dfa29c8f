"""Acceptance criteria 1-9, each at its stated tolerance.

Every test returns a short detail string that the conftest hook prints in a
per-criterion pass/fail summary.  The functions return values, so pytest's
return-not-none warning is silenced for this module.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import criterion
from gen import DATA, SHIPPED, bounded_query, random_desire, random_preference, random_theory, shipped
from pplan.asp import AspProgram, DesireTable, Atom, emit_sat_rules, stratified_eval, trajectory_facts
from pplan.cli import EXIT_OK, main
from pplan.planner import PlanQuery, enumerate_trajectories
from pplan.patterns import (
    NOOP,
    STOP,
    cheapest_transform,
    load_costs,
    plan_cost,
    shortest_action_transform,
    shortest_formula,
)
from pplan.pp import Chain, as_preference
from pplan.pp_parser import load_preferences
from pplan.semantics import leaf_values, relation_matrices, satisfaction_vector
from pplan.solver import cross_check, solve
from pplan.weights import weight_from_values

pytestmark = pytest.mark.filterwarnings("ignore::pytest.PytestReturnNotNoneWarning")

DOM = DATA / "domains"
PREF = DATA / "prefs"
PLANS = DATA / "plans"
PATTERN_HORIZON = 6


def cli(capsys, *argv):
    start = time.perf_counter()
    code = main([str(a) for a in argv])
    elapsed = time.perf_counter() - start
    out, _ = capsys.readouterr()
    return code, out, elapsed


def plan_lines(out: str) -> list[str]:
    return [line for line in out.splitlines() if line.startswith("occ(")]


@criterion(1, "travel ordering: cost<|time walks, time<|cost rides")
def test_criterion_1_travel_ordering(capsys):
    code, out, t1 = cli(capsys, "plan", DOM / "travel.dom", PREF / "travel_cost_time.pref", "--length", 4)
    assert code == EXIT_OK
    assert plan_lines(out) == ["occ(walk(home,school),0)."]
    code, out, t2 = cli(capsys, "plan", DOM / "travel.dom", PREF / "travel_time_cost.pref", "--length", 4)
    assert code == EXIT_OK
    assert plan_lines(out) == ["occ(call_taxi(home),0).", "occ(take_taxi(home,school),1)."]
    assert t1 < 1.0 and t2 < 1.0
    return f"{t1:.3f}s / {t2:.3f}s"


@criterion(2, "coffee detour, and a coffee-free plan without money")
def test_criterion_2_coffee_detour(capsys):
    code, out, _ = cli(capsys, "plan", DOM / "coffee.dom", PREF / "coffee.pref", "--length", 4)
    assert code == EXIT_OK
    steps = plan_lines(out)
    assert "occ(buy_coffee,1)." in steps
    assert steps[0] == "occ(walk(home,coffee_shop),0)."
    code, out, _ = cli(capsys, "plan", DOM / "coffee_no_money.dom", PREF / "coffee.pref", "--length", 4)
    assert code == 0
    steps = plan_lines(out)
    assert steps and not any("buy_coffee" in s for s in steps)
    return f"fallback without money has {len(steps)} steps"


@criterion(3, "incomparable under time & cost, A preferred under time | cost")
def test_criterion_3_incomparability(capsys):
    args = ["compare", DOM / "coffee_taxi.dom", PREF / "coffee_time_cost.pref", PLANS / "coffee_walk_walk.plan", PLANS / "coffee_walk_taxi.plan"]
    code, out, _ = cli(capsys, *args, "--select", "both")
    assert code == EXIT_OK and out.strip() == "incomparable"
    code, out, _ = cli(capsys, *args, "--select", "either")
    assert code == EXIT_OK and out.strip() == "A preferred"
    return "exact"


@criterion(4, "stratified program agrees with satisfaction on random desires")
def test_criterion_4_oracle_equivalence():
    start = time.perf_counter()
    pairs = 0
    checks = 0
    seed = 0
    while pairs < 600:
        rng = random.Random(seed)
        seed += 1
        th = random_theory(rng, n_fluents=rng.randint(3, 5))
        horizon = rng.randint(0, 4)
        trajs = list(itertools.islice(enumerate_trajectories(PlanQuery(th, horizon)), 6))
        if not trajs:
            continue
        d = random_desire(rng, th, depth=rng.randint(1, 4))
        for t in trajs:
            table = DesireTable()
            root = table.desire(d)
            program = AspProgram()
            program.add_facts(table.facts)
            program.add_facts(trajectory_facts(t))
            program.extend(emit_sat_rules(table, len(t.actions)))
            model = stratified_eval(program)
            vec = satisfaction_vector(t, d)
            for i, expected in enumerate(vec):
                assert (Atom("satisfy", (root, i)) in model) == expected, (seed, i)
                checks += 1
            pairs += 1
    elapsed = time.perf_counter() - start
    assert pairs >= 500 and elapsed < 30
    return f"{pairs} pairs, {checks} suffix checks, 0 disagreements, {elapsed:.1f}s"


@criterion(5, "admissibility and strict headroom")
def test_criterion_5_admissibility():
    trees = 0
    pairs = 0
    seed = 0
    while trees < 220:
        rng = random.Random(10_000 + seed)
        seed += 1
        th = random_theory(rng)
        q = bounded_query(th, 4, limit=200)
        trajs = list(enumerate_trajectories(q))
        if not trajs:
            continue
        assert len(trajs) <= 200
        p = random_preference(rng, th, depth=rng.randint(1, 4))
        weights = []
        for t in trajs:
            report = weight_from_values(leaf_values(t, p), p, explain=True)
            assert all(node.weight < node.max_bound for node in report.nodes.values())
            weights.append(report.weight)
        w = np.array(weights, dtype=object)
        prefer, equal = relation_matrices(trajs, p)
        heavier = w[:, None] > w[None, :]
        same = w[:, None] == w[None, :]
        assert not (prefer & ~heavier.astype(bool)).any()
        assert not (equal & ~same.astype(bool)).any()
        trees += 1
        pairs += len(trajs) ** 2
    return f"{trees} trees, {pairs} ordered pairs, 0 violations"


def _orders(trajs, p):
    prefer, equal = relation_matrices(trajs, p)
    return prefer.astype(np.int64), equal.astype(np.int64), prefer, equal


def _composed(a, b):
    return (a @ b) > 0


@criterion(6, "order theory: transitivity, mixed transitivity, antisymmetry, equivalence, associativity")
def test_criterion_6_order_theory():
    triples = 0
    for seed in range(150):
        rng = random.Random(20_000 + seed)
        th = random_theory(rng)
        trajs = list(enumerate_trajectories(bounded_query(th, 4, limit=80)))
        if not trajs:
            continue
        p = random_preference(rng, th)
        lt, eq, prefer, equal = _orders(trajs, p)
        n = len(trajs)
        triples += n**3
        assert not (_composed(lt, lt) & ~prefer).any(), "transitivity"
        assert not (_composed(lt, eq) & ~prefer).any(), "prefer then indistinguishable"
        assert not (_composed(eq.T, lt) & ~prefer).any(), "indistinguishable then prefer"
        assert not (prefer & prefer.T).any(), "antisymmetry"
        assert not np.diag(prefer).any(), "irreflexive"
        assert not (prefer & equal).any()
        assert np.diag(equal).all() and (equal == equal.T).all()
        assert not (_composed(eq, eq) & ~equal).any(), "equivalence"
        parts = [random_preference(rng, th, depth=2) for _ in range(3)]
        flat = Chain(tuple(parts))
        left = Chain((Chain((parts[0], parts[1])), parts[2]))
        right = Chain((parts[0], Chain((parts[1], parts[2]))))
        reference = relation_matrices(trajs, flat)
        for other in (left, right):
            got = relation_matrices(trajs, other)
            assert (got[0] == reference[0]).all() and (got[1] == reference[1]).all(), "associativity"
    return f"{triples} sampled triples"


def _shipped_cases():
    cases = []
    for domain, pref_file, length in [
        ("travel", "travel_cost_time.pref", 5),
        ("travel", "travel_time_cost.pref", 5),
        ("coffee", "coffee.pref", 5),
        ("coffee_no_money", "coffee.pref", 5),
        ("coffee_taxi", "coffee_time_cost.pref", 5),
        ("monkey", "monkey.pref", 6),
    ]:
        th = shipped(domain)
        decl = load_preferences(PREF / pref_file, th)
        named = [decl.root, *decl.prefs.values(), *(as_preference(d) for d in decl.desires.values())]
        cases += [(f"{domain}/{pref_file}", PlanQuery(th, length), p) for p in named]
    return cases


@criterion(7, "weight winner is undominated on shipped examples and 100 fuzz domains")
def test_criterion_7_solver_soundness():
    shipped_cases = _shipped_cases()
    for _, q, p in shipped_cases:
        assert cross_check(q, p).ok
    fuzz = 0
    seed = 0
    while fuzz < 100:
        rng = random.Random(30_000 + seed)
        seed += 1
        th = random_theory(rng)
        q = bounded_query(th, 4, limit=150)
        if not any(True for _ in enumerate_trajectories(q)):
            continue
        assert cross_check(q, random_preference(rng, th)).ok
        fuzz += 1
    return f"{len(shipped_cases)} shipped cases, {fuzz} fuzz domains"


def _pattern_horizons(th):
    for h in range(PATTERN_HORIZON + 1):
        trajs = list(enumerate_trajectories(PlanQuery(th, h)))
        if trajs:
            yield h, trajs


@pytest.mark.parametrize("domain", SHIPPED)
@criterion(8, "patterns match brute-force minimum length and cost")
def test_criterion_8_patterns(domain):
    th = shipped(domain)
    costs = load_costs(DATA / "costs" / f"{domain}.costs")
    timings = {}
    mismatches = []
    start = time.perf_counter()
    for h, trajs in _pattern_horizons(th):
        shortest = min(len(t) for t in trajs)
        best = solve(PlanQuery(th, h), shortest_formula(h, th.goal)).best
        if len(best) != shortest:
            mismatches.append(f"shortest_formula h={h}: {len(best)} vs {shortest}")
    timings["shortest_formula"] = time.perf_counter() - start

    start = time.perf_counter()
    new, short = shortest_action_transform(th)
    for h, trajs in _pattern_horizons(th):
        shortest = min(len(t) for t in trajs)
        best = solve(PlanQuery(new, h + 1), short).best
        steps = [a for a in best.actions if a not in (STOP, NOOP)]
        if len(steps) != shortest:
            mismatches.append(f"shortest_action h={h}: {len(steps)} vs {shortest}")
    timings["shortest_action"] = time.perf_counter() - start

    start = time.perf_counter()
    for h, trajs in _pattern_horizons(th):
        high = max(costs.values()) * h
        new, pref = cheapest_transform(th, costs, 0, high)
        best = solve(PlanQuery(new, h), pref).best
        cheapest = min(plan_cost(t, costs) for t in trajs)
        if plan_cost(best, costs) != cheapest:
            mismatches.append(f"cheapest h={h}: {plan_cost(best, costs)} vs {cheapest}")
    timings["cheapest"] = time.perf_counter() - start

    slow = {k: v for k, v in timings.items() if v >= 10}
    assert not slow, slow
    assert not mismatches, f"{domain}: " + "; ".join(mismatches)


@criterion(9, "byte-identical emission and golden corpus")
def test_criterion_9_golden_and_determinism(tmp_path):
    golden = [("travel", "travel_cost_time", 3), ("coffee", "coffee", 3), ("monkey", "monkey", 4)]
    for domain, prefs, length in golden:
        outputs = []
        for seed in ("0", "99"):
            out = tmp_path / f"{domain}-{seed}.lp"
            subprocess.run(
                [sys.executable, "-m", "pplan", "emit", str(DOM / f"{domain}.dom"), str(PREF / f"{prefs}.pref"), "--length", str(length), "--out", str(out)],
                check=True,
                env=dict(os.environ, PYTHONHASHSEED=seed),
            )
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        assert outputs[0] == (DATA / "golden" / f"{domain}.lp").read_bytes(), domain
    return f"{len(golden)} golden files"
