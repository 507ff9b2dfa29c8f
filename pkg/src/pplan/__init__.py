"""Planning with qualitative preferences over trajectories.

Typical use::

    from pplan import load_domain, load_preferences, PlanQuery, solve

    theory = load_domain("travel.dom")
    prefs = load_preferences("travel.pref", theory)
    best = solve(PlanQuery(theory, 4), prefs.root).best
"""

from __future__ import annotations

__version__ = "0.1.0"

from .actions import ActionTheory, State, audit, initial_state, transition
from .domain import load_domain, parse_domain
from .planner import PlanQuery, Trajectory, enumerate_trajectories, replay
from .pp_parser import load_preferences, parse_desire, parse_preference, parse_preference_file
from .semantics import Comparison, compare, satisfies
from .solver import cross_check, solve
from .weights import max_weight, weight

__all__ = [
    "__version__",
    "ActionTheory",
    "State",
    "audit",
    "initial_state",
    "transition",
    "load_domain",
    "parse_domain",
    "PlanQuery",
    "Trajectory",
    "enumerate_trajectories",
    "replay",
    "load_preferences",
    "parse_desire",
    "parse_preference",
    "parse_preference_file",
    "Comparison",
    "compare",
    "satisfies",
    "cross_check",
    "solve",
    "max_weight",
    "weight",
]
