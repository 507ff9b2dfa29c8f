"""Desire satisfaction and the preferred/indistinguishable relations."""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .actions import ActionTheory, formula_fluents, holds
from .errors import UnresolvedAction, UnresolvedFluent
from .planner import Trajectory
from .pp import (
    Always,
    And,
    Atomic,
    Chain,
    Conj,
    Desire,
    Disj,
    Eventually,
    Goal,
    Neg,
    Next,
    Not,
    Occ,
    Or,
    Preference,
    StateFormula,
    Until,
    as_preference,
    desire_children,
    preference_desires,
)

__all__ = [
    "Comparison",
    "satisfaction_vector",
    "satisfies",
    "check_names",
    "compare_basic",
    "compare_atomic",
    "compare_atomic_detail",
    "compare_general",
    "compare",
    "leaf_values",
    "relation_matrices",
    "dominance_maximal",
]


class Comparison(enum.Enum):
    LEFT = "A preferred"
    RIGHT = "B preferred"
    INDISTINGUISHABLE = "indistinguishable"
    INCOMPARABLE = "incomparable"

    def flipped(self) -> Comparison:
        if self is Comparison.LEFT:
            return Comparison.RIGHT
        if self is Comparison.RIGHT:
            return Comparison.LEFT
        return self


def check_names(d: Desire, theory: ActionTheory) -> None:
    """Raise :class:`UnresolvedName` if ``d`` mentions undeclared names."""
    if isinstance(d, (StateFormula, Goal)):
        for f in formula_fluents(d.formula):
            if f not in theory.fluent_set:
                raise UnresolvedFluent(f"unknown fluent {f}")
    elif isinstance(d, Occ):
        if d.action not in theory.action_set:
            raise UnresolvedAction(f"unknown action {d.action}")
    for child in desire_children(d):
        check_names(child, theory)


def satisfaction_vector(t: Trajectory, d: Desire, memo: dict | None = None) -> tuple[bool, ...]:
    """``v[i]`` is whether the suffix starting at state ``i`` satisfies ``d``."""
    if memo is None:
        memo = {}
    key = id(d)
    hit = memo.get(key)
    if hit is not None and hit[0] is d:
        return hit[1]
    n = len(t.actions)
    if isinstance(d, StateFormula):
        out = tuple(holds(s, d.formula) for s in t.states)
    elif isinstance(d, Occ):
        out = tuple(i < n and t.actions[i] == d.action for i in range(n + 1))
    elif isinstance(d, Goal):
        out = (holds(t.states[-1], d.formula),) * (n + 1)
    elif isinstance(d, And):
        a, b = satisfaction_vector(t, d.left, memo), satisfaction_vector(t, d.right, memo)
        out = tuple(x and y for x, y in zip(a, b))
    elif isinstance(d, Or):
        a, b = satisfaction_vector(t, d.left, memo), satisfaction_vector(t, d.right, memo)
        out = tuple(x or y for x, y in zip(a, b))
    elif isinstance(d, Not):
        out = tuple(not x for x in satisfaction_vector(t, d.body, memo))
    elif isinstance(d, Next):
        a = satisfaction_vector(t, d.body, memo)
        out = tuple(i < n and a[i + 1] for i in range(n + 1))
    elif isinstance(d, (Always, Eventually)):
        a = satisfaction_vector(t, d.body, memo)
        acc = [False] * (n + 1)
        run = isinstance(d, Always)
        for i in range(n, -1, -1):
            run = (run and a[i]) if isinstance(d, Always) else (run or a[i])
            acc[i] = run
        out = tuple(acc)
    elif isinstance(d, Until):
        a, b = satisfaction_vector(t, d.left, memo), satisfaction_vector(t, d.right, memo)
        acc = [False] * (n + 1)
        later = False  # no witness beyond the last state
        for i in range(n, -1, -1):
            later = b[i] or (a[i] and later)
            acc[i] = later
        out = tuple(acc)
    else:
        raise TypeError(f"not a desire: {d!r}")
    memo[key] = (d, out)
    return out


def satisfies(t: Trajectory, d: Desire, theory: ActionTheory | None = None) -> bool:
    if theory is not None:
        check_names(d, theory)
    return satisfaction_vector(t, d)[0]


def compare_basic(a: Trajectory, b: Trajectory, d: Desire) -> Comparison:
    sa, sb = satisfies(a, d), satisfies(b, d)
    if sa == sb:
        return Comparison.INDISTINGUISHABLE
    return Comparison.LEFT if sa else Comparison.RIGHT


def compare_atomic_detail(a: Trajectory, b: Trajectory, p: Atomic) -> tuple[Comparison, int | None]:
    """Comparison plus the 0-based chain index that decided it."""
    for i, d in enumerate(p.chain):
        c = compare_basic(a, b, d)
        if c is not Comparison.INDISTINGUISHABLE:
            return c, i
    return Comparison.INDISTINGUISHABLE, None


def compare_atomic(a: Trajectory, b: Trajectory, p: Atomic) -> Comparison:
    return compare_atomic_detail(a, b, p)[0]


# The general tier works on precomputed leaf values so that comparing many
# pairs costs one satisfaction pass per trajectory.


def leaf_values(t: Trajectory, p: Preference | Desire) -> tuple[bool, ...]:
    """Satisfaction of every desire of ``p`` in preorder."""
    memo: dict = {}
    return tuple(satisfaction_vector(t, d, memo)[0] for d in preference_desires(as_preference(p)))


def _relations(p: Preference, va, vb, pos: int) -> tuple[bool, bool, bool, int]:
    """Return ``(a < b, b < a, a ~ b, next leaf position)``."""
    if isinstance(p, Atomic):
        k = len(p.chain)
        for x, y in zip(va[pos : pos + k], vb[pos : pos + k]):
            if x != y:
                return x, y, False, pos + k
        return False, False, True, pos + k
    if isinstance(p, (Conj, Disj)):
        lt1, gt1, eq1, pos = _relations(p.left, va, vb, pos)
        lt2, gt2, eq2, pos = _relations(p.right, va, vb, pos)
        if isinstance(p, Conj):
            return lt1 and lt2, gt1 and gt2, eq1 and eq2, pos
        lt = (lt1 and eq2) or (eq1 and lt2) or (lt1 and lt2)
        gt = (gt1 and eq2) or (eq1 and gt2) or (gt1 and gt2)
        return lt, gt, eq1 and eq2, pos
    if isinstance(p, Neg):
        lt1, gt1, eq1, pos = _relations(p.body, va, vb, pos)
        return gt1, lt1, eq1, pos
    if isinstance(p, Chain):
        decided = None
        for part in p.parts:
            lt, gt, eq, pos = _relations(part, va, vb, pos)
            if decided is None and not eq:
                decided = (lt, gt)
        if decided is None:
            return False, False, True, pos
        return decided[0], decided[1], False, pos
    raise TypeError(f"not a preference: {p!r}")


def compare_values(va: Sequence[bool], vb: Sequence[bool], p: Preference | Desire) -> Comparison:
    lt, gt, eq, _ = _relations(as_preference(p), va, vb, 0)
    if lt:
        return Comparison.LEFT
    if gt:
        return Comparison.RIGHT
    if eq:
        return Comparison.INDISTINGUISHABLE
    return Comparison.INCOMPARABLE


def compare_general(a: Trajectory, b: Trajectory, p: Preference | Desire) -> Comparison:
    return compare_values(leaf_values(a, p), leaf_values(b, p), p)


compare = compare_general


# -- relation matrices -------------------------------------------------------------


def _matrices(p: Preference, values: np.ndarray, pos: int):
    if isinstance(p, Atomic):
        k = len(p.chain)
        n = values.shape[0]
        prefer = np.zeros((n, n), dtype=bool)
        equal = np.ones((n, n), dtype=bool)
        for j in range(pos, pos + k):
            s = values[:, j]
            prefer |= equal & (s[:, None] & ~s[None, :])
            equal &= s[:, None] == s[None, :]
        return prefer, equal, pos + k
    if isinstance(p, (Conj, Disj)):
        p1, e1, pos = _matrices(p.left, values, pos)
        p2, e2, pos = _matrices(p.right, values, pos)
        if isinstance(p, Conj):
            return p1 & p2, e1 & e2, pos
        return (p1 & e2) | (e1 & p2) | (p1 & p2), e1 & e2, pos
    if isinstance(p, Neg):
        p1, e1, pos = _matrices(p.body, values, pos)
        return p1.T.copy(), e1, pos
    if isinstance(p, Chain):
        prefer = None
        equal = None
        for part in p.parts:
            lt, eq, pos = _matrices(part, values, pos)
            if prefer is None:
                prefer, equal = lt, eq
            else:
                prefer = prefer | (equal & lt)
                equal = equal & eq
        return prefer, equal, pos
    raise TypeError(f"not a preference: {p!r}")


def relation_matrices(trajs: Sequence[Trajectory], p: Preference | Desire) -> tuple[np.ndarray, np.ndarray]:
    """Boolean ``(prefer, indistinguishable)`` matrices; ``prefer[i, j]`` means ``trajs[i]`` is preferred."""
    p = as_preference(p)
    leaves = len(preference_desires(p))
    values = np.array([leaf_values(t, p) for t in trajs], dtype=bool).reshape(len(trajs), leaves)
    prefer, equal, _ = _matrices(p, values, 0)
    return prefer, equal


def dominance_maximal(trajs: Sequence[Trajectory], p: Preference | Desire) -> list[Trajectory]:
    """Members of ``trajs`` to which no other member is preferred."""
    trajs = list(trajs)
    if not trajs:
        return []
    prefer, _ = relation_matrices(trajs, p)
    dominated = prefer.any(axis=0)
    return [t for t, dom in zip(trajs, dominated) if not dom]
