"""Bounded-length trajectory enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .actions import ActionTheory, State, executable, holds, initial_state, successors
from .errors import IndexOutOfRange, InvalidPlan, NotExecutable, ParseError, UnknownAction

__all__ = ["Trajectory", "PlanQuery", "suffix", "enumerate_trajectories", "count_trajectories", "replay", "parse_plan", "format_plan"]


@dataclass(frozen=True)
class Trajectory:
    """``s0 a1 s1 ... an sn`` stored as ``n + 1`` states and ``n`` actions."""

    states: tuple[State, ...]
    actions: tuple[str, ...]

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise ValueError("a trajectory needs exactly one more state than actions")

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def last(self) -> State:
        return self.states[-1]

    def validate(self, theory: ActionTheory) -> None:
        """Raise :class:`InvalidPlan` unless every step is a legal successor."""
        for i, action in enumerate(self.actions):
            if not executable(theory, action, self.states[i]):
                raise InvalidPlan(f"step {i}: {action} is not executable")
            if self.states[i + 1] not in successors(theory, action, self.states[i]):
                raise InvalidPlan(f"step {i}: state {i + 1} is not a result of {action}")

    def __str__(self) -> str:
        return " ".join(["s0"] + [f"{a} s{i + 1}" for i, a in enumerate(self.actions)])


@dataclass(frozen=True)
class PlanQuery:
    theory: ActionTheory
    max_length: int
    post_goal_actions: bool = True

    def __post_init__(self):
        if self.max_length < 0:
            raise ValueError("max_length must be nonnegative")


def suffix(t: Trajectory, i: int) -> Trajectory:
    """The trajectory ``s_i a_{i+1} ... s_n``."""
    if not 0 <= i <= len(t.actions):
        raise IndexOutOfRange(f"suffix index {i} outside 0..{len(t.actions)}")
    return Trajectory(t.states[i:], t.actions[i:])


def enumerate_trajectories(query: PlanQuery) -> Iterator[Trajectory]:
    """Yield goal-achieving trajectories depth first, actions in declaration order.

    A trajectory is yielded before any of its extensions.
    """
    theory = query.theory
    goal = theory.goal
    s0 = initial_state(theory)
    states: list[State] = [s0]
    actions: list[str] = []

    def visit() -> Iterator[Trajectory]:
        state = states[-1]
        reached = holds(state, goal)
        if reached:
            yield Trajectory(tuple(states), tuple(actions))
            if not query.post_goal_actions:
                return
        if len(actions) == query.max_length:
            return
        for action in theory.actions:
            if not executable(theory, action, state):
                continue
            for nxt in successors(theory, action, state):
                states.append(nxt)
                actions.append(action)
                yield from visit()
                states.pop()
                actions.pop()

    yield from visit()


def count_trajectories(query: PlanQuery) -> int:
    return sum(1 for _ in enumerate_trajectories(query))


def replay(theory: ActionTheory, actions: Sequence[str]) -> Trajectory:
    """Execute ``actions`` from the initial state.

    Raises :class:`InvalidPlan` when a step is unknown, not executable or
    nondeterministic.
    """
    state = initial_state(theory)
    states = [state]
    for i, action in enumerate(actions):
        try:
            results = successors(theory, action, state)
        except (NotExecutable, UnknownAction) as exc:
            raise InvalidPlan(f"step {i}: {exc}") from exc
        if len(results) != 1:
            raise InvalidPlan(f"step {i}: {action} has {len(results)} possible results")
        state = results[0]
        states.append(state)
    return Trajectory(tuple(states), tuple(actions))


_OCC = re.compile(r"^occ\(\s*(.+?)\s*,\s*(\d+)\s*\)\s*\.?$")


def parse_plan(text: str, source: str = "<plan>") -> list[str]:
    """Action sequence from ``occ(a, t).`` lines; ``%`` starts a comment."""
    steps: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = _OCC.match(line)
        if not m:
            raise ParseError("expected 'occ(action, time).'", lineno, 1, source)
        t = int(m.group(2))
        if t in steps:
            raise InvalidPlan(f"{source}:{lineno}: two actions at time {t}")
        steps[t] = re.sub(r"\s+", "", m.group(1))
    if sorted(steps) != list(range(len(steps))):
        raise InvalidPlan(f"{source}: time points must be 0..{len(steps) - 1} without gaps")
    return [steps[t] for t in range(len(steps))]


def format_plan(t: Trajectory, diffs: bool = True) -> str:
    """Plan-file text for ``t``; state changes appear as comments."""
    lines = []
    if diffs:
        lines.append(f"% s0: {' '.join(t.states[0].positives) or '(no true fluents)'}")
    for i, a in enumerate(t.actions):
        lines.append(f"occ({a},{i}).")
        if diffs:
            before, after = set(t.states[i].positives), set(t.states[i + 1].positives)
            change = [f"+{f}" for f in sorted(after - before)] + [f"-{f}" for f in sorted(before - after)]
            lines.append(f"% s{i + 1}: {' '.join(change) or '(unchanged)'}")
    return "\n".join(lines) + "\n"
