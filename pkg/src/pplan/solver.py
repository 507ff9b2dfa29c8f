"""Most-preferred trajectory search over the bounded enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoPlan, SoundnessViolation
from .planner import PlanQuery, Trajectory, enumerate_trajectories
from .pp import Desire, Preference, as_preference
from .semantics import dominance_maximal, leaf_values
from .weights import WeightReport, max_weight, weight_from_values

__all__ = ["Solution", "solve", "cross_check", "CrossCheck"]


@dataclass
class Solution:
    best: Trajectory
    mode: str
    report: WeightReport | None = None
    index: int = 0  # position of ``best`` in the enumeration
    explored: int = 0
    maximal: list = field(default_factory=list)  # dominance mode only


def solve(query: PlanQuery, pref: Preference | Desire, mode: str = "weight", explain: bool = False) -> Solution:
    """Select a most preferred trajectory.

    ``weight`` keeps the first trajectory of maximal weight in enumeration
    order.  ``dominance`` computes the full set of undominated trajectories and
    reports the first of them as ``best``.
    """
    pref = as_preference(pref)
    if mode == "weight":
        max_weight(pref)  # static overflow and precision guard
        best = None
        best_w = -1
        best_i = 0
        count = 0
        for i, t in enumerate(enumerate_trajectories(query)):
            count += 1
            w = weight_from_values(leaf_values(t, pref), pref).weight
            if w > best_w:
                best, best_w, best_i = t, w, i
        if best is None:
            raise NoPlan("no trajectory achieves G")
        report = weight_from_values(leaf_values(best, pref), pref, explain=True) if explain else None
        if report is None:
            report = WeightReport(best_w, max_weight(pref))
        return Solution(best, mode, report, best_i, count)
    if mode == "dominance":
        trajs = list(enumerate_trajectories(query))
        if not trajs:
            raise NoPlan("no trajectory achieves G")
        maximal = dominance_maximal(trajs, pref)
        best = maximal[0]
        index = next(i for i, t in enumerate(trajs) if t is best)
        report = weight_from_values(leaf_values(best, pref), pref, explain=explain)
        return Solution(best, mode, report, index, len(trajs), maximal)
    raise ValueError(f"unknown mode {mode!r}; expected 'weight' or 'dominance'")


@dataclass
class CrossCheck:
    ok: bool
    trajectories: int
    maximal: int
    winner: Trajectory

    def __str__(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        return f"{verdict}: winner among {self.maximal} undominated of {self.trajectories} trajectories"


def cross_check(query: PlanQuery, pref: Preference | Desire) -> CrossCheck:
    """Assert that the weight-mode winner is undominated.

    Raises :class:`SoundnessViolation` otherwise.
    """
    pref = as_preference(pref)
    trajs = list(enumerate_trajectories(query))
    if not trajs:
        raise NoPlan("no trajectory achieves G")
    winner = solve(query, pref, "weight").best
    maximal = dominance_maximal(trajs, pref)
    ok = any(t == winner for t in maximal)
    result = CrossCheck(ok, len(trajs), len(maximal), winner)
    if not ok:
        raise SoundnessViolation(f"weight-mode winner {winner} is dominated")
    return result
