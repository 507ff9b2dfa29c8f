"""Ground action theories: states, executability and the successor relation.

Fluents and actions are ground atoms rendered as canonical strings such as
``at(home)`` or ``walk(home,school)``.  A state is the complete, consistent,
statically closed set of literals over the declared fluents.

A candidate successor ``nxt`` of ``state`` under ``action`` is accepted when

    nxt == close(direct_effects(action, state) | (state & nxt))

so effects are forced, inertia keeps whatever the successor still agrees
with, and ``close`` applies the static laws.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    Inconsistent,
    InconsistentTheory,
    NotAState,
    NotExecutable,
    PPlanError,
    UnknownAction,
    UnknownFluent,
)

__all__ = [
    "FluentLiteral",
    "Formula",
    "Lit",
    "FAnd",
    "FOr",
    "FNot",
    "FConst",
    "TRUE",
    "FALSE",
    "DynamicLaw",
    "StaticLaw",
    "ExecCondition",
    "ActionTheory",
    "State",
    "static_closure",
    "holds",
    "executable",
    "transition",
    "initial_state",
    "formula_fluents",
    "to_dnf",
    "format_formula",
    "audit",
    "AuditReport",
]

# Guard on the number of optional literal flips explored per transition.
MAX_OPTIONAL_FLIPS = 16


@dataclass(frozen=True, order=True)
class FluentLiteral:
    fluent: str
    positive: bool = True

    def complement(self) -> FluentLiteral:
        return FluentLiteral(self.fluent, not self.positive)

    def __neg__(self) -> FluentLiteral:
        return self.complement()

    def __str__(self) -> str:
        return self.fluent if self.positive else "-" + self.fluent

    @classmethod
    def parse(cls, text: str) -> FluentLiteral:
        text = text.strip()
        if text.startswith("-"):
            return cls(text[1:].strip(), False)
        return cls(text, True)


# -- fluent formulae ---------------------------------------------------------


class Formula:
    """Propositional formula over fluent literals."""

    __slots__ = ()


@dataclass(frozen=True)
class Lit(Formula):
    literal: FluentLiteral


@dataclass(frozen=True)
class FAnd(Formula):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("FAnd needs at least one operand")


@dataclass(frozen=True)
class FOr(Formula):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("FOr needs at least one operand")


@dataclass(frozen=True)
class FNot(Formula):
    body: Formula


@dataclass(frozen=True)
class FConst(Formula):
    value: bool


TRUE = FConst(True)
FALSE = FConst(False)


def formula_fluents(formula: Formula) -> set[str]:
    if isinstance(formula, Lit):
        return {formula.literal.fluent}
    if isinstance(formula, (FAnd, FOr)):
        out: set[str] = set()
        for part in formula.parts:
            out |= formula_fluents(part)
        return out
    if isinstance(formula, FNot):
        return formula_fluents(formula.body)
    if isinstance(formula, FConst):
        return set()
    raise TypeError(f"not a fluent formula: {formula!r}")


def format_formula(formula: Formula, and_op: str = "&", or_op: str = "|", not_op: str = "!") -> str:
    """Render a formula fully parenthesised with the given connective tokens."""
    if isinstance(formula, Lit):
        return str(formula.literal)
    if isinstance(formula, FConst):
        return "true" if formula.value else "false"
    if isinstance(formula, FNot):
        return f"{not_op}{_wrap(formula.body, and_op, or_op, not_op)}"
    op = f" {and_op} " if isinstance(formula, FAnd) else f" {or_op} "
    return op.join(_wrap(p, and_op, or_op, not_op) for p in formula.parts)


def _wrap(formula, and_op, or_op, not_op):
    text = format_formula(formula, and_op, or_op, not_op)
    if isinstance(formula, (FAnd, FOr)) and len(formula.parts) > 1:
        return f"({text})"
    return text


def to_dnf(formula: Formula) -> list[tuple[FluentLiteral, ...]]:
    """Disjunctive normal form as a list of consistent literal conjunctions.

    An empty list is unsatisfiable; ``[()]`` is valid.
    """
    terms = _dnf(formula, True)
    out = []
    seen = set()
    for term in terms:
        if any(lit.complement() in term for lit in term):
            continue
        key = tuple(sorted(term))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def _dnf(formula: Formula, polarity: bool) -> list[frozenset]:
    if isinstance(formula, Lit):
        lit = formula.literal if polarity else formula.literal.complement()
        return [frozenset([lit])]
    if isinstance(formula, FConst):
        return [frozenset()] if formula.value == polarity else []
    if isinstance(formula, FNot):
        return _dnf(formula.body, not polarity)
    conjunctive = isinstance(formula, FAnd) == polarity
    parts = [_dnf(p, polarity) for p in formula.parts]
    if conjunctive:
        terms = [frozenset()]
        for alternatives in parts:
            terms = [t | a for t in terms for a in alternatives]
        return terms
    return [t for alternatives in parts for t in alternatives]


# -- laws and theories -------------------------------------------------------


@dataclass(frozen=True)
class DynamicLaw:
    """``action causes effect if preconditions``."""

    action: str
    effect: FluentLiteral
    preconditions: tuple[FluentLiteral, ...] = ()


@dataclass(frozen=True)
class StaticLaw:
    """``head if body``."""

    head: FluentLiteral
    body: tuple[FluentLiteral, ...] = ()


@dataclass(frozen=True)
class ExecCondition:
    """``action executable_if body``."""

    action: str
    body: tuple[FluentLiteral, ...] = ()


@dataclass(frozen=True)
class State:
    """A complete set of fluent literals.

    Instances produced by :func:`initial_state` and :func:`transition` are
    validated; use :meth:`ActionTheory.make_state` to build one by hand.
    """

    literals: frozenset

    def __contains__(self, literal: FluentLiteral) -> bool:
        return literal in self.literals

    def __iter__(self) -> Iterator[FluentLiteral]:
        return iter(sorted(self.literals))

    def __len__(self) -> int:
        return len(self.literals)

    @cached_property
    def positives(self) -> tuple[str, ...]:
        return tuple(sorted(l.fluent for l in self.literals if l.positive))

    def sort_key(self):
        return self.positives

    def __str__(self) -> str:
        return "{" + ", ".join(str(l) for l in self) + "}"


@dataclass(frozen=True)
class ActionTheory:
    """A ground action theory ``(D, I)`` together with the goal ``G``."""

    fluents: tuple[str, ...]
    actions: tuple[str, ...]
    dynamic: tuple[DynamicLaw, ...] = ()
    static: tuple[StaticLaw, ...] = ()
    exec: tuple[ExecCondition, ...] = ()
    initial: frozenset = frozenset()
    goal: Formula = TRUE
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        fluents = set(self.fluents)
        actions = set(self.actions)
        if len(fluents) != len(self.fluents):
            raise PPlanError("duplicate fluent declaration")
        if len(actions) != len(self.actions):
            raise PPlanError("duplicate action declaration")
        if fluents & actions:
            raise PPlanError(f"names used both as fluent and action: {sorted(fluents & actions)}")

        def check_lits(lits, where):
            for lit in lits:
                if lit.fluent not in fluents:
                    raise UnknownFluent(f"{lit.fluent} (in {where})")

        for law in self.dynamic:
            if law.action not in actions:
                raise UnknownAction(law.action)
            check_lits((law.effect, *law.preconditions), f"dynamic law for {law.action}")
        for law in self.static:
            check_lits((law.head, *law.body), "static law")
        for cond in self.exec:
            if cond.action not in actions:
                raise UnknownAction(cond.action)
            check_lits(cond.body, f"executability condition of {cond.action}")
        check_lits(self.initial, "initial state")
        unknown = formula_fluents(self.goal) - fluents
        if unknown:
            raise UnknownFluent(f"{sorted(unknown)[0]} (in goal)")

    # indexes ---------------------------------------------------------------

    @cached_property
    def fluent_set(self) -> frozenset:
        return frozenset(self.fluents)

    @cached_property
    def action_set(self) -> frozenset:
        return frozenset(self.actions)

    @cached_property
    def dynamic_by_action(self) -> dict:
        out: dict[str, list[DynamicLaw]] = {a: [] for a in self.actions}
        for law in self.dynamic:
            out[law.action].append(law)
        return out

    @cached_property
    def exec_by_action(self) -> dict:
        out: dict[str, list[ExecCondition]] = {a: [] for a in self.actions}
        for cond in self.exec:
            out[cond.action].append(cond)
        return out

    @cached_property
    def static_index(self) -> _StaticIndex:
        return _StaticIndex(self.static)

    @cached_property
    def static_heads(self) -> frozenset:
        return frozenset(law.head for law in self.static)

    def make_state(self, literals: Iterable[FluentLiteral]) -> State:
        """Validate ``literals`` as a state of this theory."""
        lits = frozenset(literals)
        for lit in lits:
            if lit.fluent not in self.fluent_set:
                raise UnknownFluent(lit.fluent)
            if lit.complement() in lits:
                raise NotAState(f"both {lit} and {lit.complement()} present")
        missing = [f for f in self.fluents if FluentLiteral(f) not in lits and FluentLiteral(f, False) not in lits]
        if missing:
            raise NotAState(f"incomplete: no literal for {missing[0]}")
        closed = self.static_index.close(lits)
        if closed is None or closed != lits:
            raise NotAState("violates a static causal law")
        return State(lits)

    def replace(self, **changes) -> ActionTheory:
        fields = dict(
            fluents=self.fluents,
            actions=self.actions,
            dynamic=self.dynamic,
            static=self.static,
            exec=self.exec,
            initial=self.initial,
            goal=self.goal,
        )
        fields.update(changes)
        return ActionTheory(**fields)


class _StaticIndex:
    """Worklist closure under static laws, indexed by body literal."""

    def __init__(self, laws):
        self.heads = []
        self.sizes = []
        self.unconditional = []
        self.by_body: dict[FluentLiteral, list[int]] = {}
        for idx, law in enumerate(laws):
            body = frozenset(law.body)
            self.heads.append(law.head)
            self.sizes.append(len(body))
            if not body:
                self.unconditional.append(law.head)
            for lit in body:
                self.by_body.setdefault(lit, []).append(idx)

    def close(self, literals) -> frozenset | None:
        """Least superset closed under the laws, or ``None`` if inconsistent."""
        try:
            return self.close_or_raise(literals)
        except Inconsistent:
            return None

    def close_or_raise(self, literals) -> frozenset:
        result = set(literals)
        for lit in result:
            if lit.complement() in result:
                raise Inconsistent(lit if lit.positive else lit.complement())
        remaining = list(self.sizes)
        agenda = deque(result)
        for head in self.unconditional:
            if head not in result:
                result.add(head)
                agenda.append(head)
                if head.complement() in result:
                    raise Inconsistent(head)
        while agenda:
            lit = agenda.popleft()
            for idx in self.by_body.get(lit, ()):
                remaining[idx] -= 1
                if remaining[idx] == 0:
                    head = self.heads[idx]
                    if head not in result:
                        if head.complement() in result:
                            raise Inconsistent(head)
                        result.add(head)
                        agenda.append(head)
        return frozenset(result)


def static_closure(literals: Iterable[FluentLiteral], laws: Iterable[StaticLaw]) -> frozenset:
    """Least superset of ``literals`` closed under ``laws``.

    Raises :class:`Inconsistent` when complementary literals are derived.
    """
    return _StaticIndex(list(laws)).close_or_raise(frozenset(literals))


def holds(state: State, formula: Formula) -> bool:
    if isinstance(formula, Lit):
        lit = formula.literal
        if lit in state.literals:
            return True
        if lit.complement() in state.literals:
            return False
        raise UnknownFluent(lit.fluent)
    if isinstance(formula, FAnd):
        # evaluate every operand so unknown fluents are always reported
        return all([holds(state, p) for p in formula.parts])
    if isinstance(formula, FOr):
        return any([holds(state, p) for p in formula.parts])
    if isinstance(formula, FNot):
        return not holds(state, formula.body)
    if isinstance(formula, FConst):
        return formula.value
    raise TypeError(f"not a fluent formula: {formula!r}")


def executable(theory: ActionTheory, action: str, state: State) -> bool:
    if action not in theory.action_set:
        raise UnknownAction(action)
    lits = state.literals
    return any(all(p in lits for p in cond.body) for cond in theory.exec_by_action[action])


def direct_effects(theory: ActionTheory, action: str, state: State) -> frozenset:
    lits = state.literals
    return frozenset(
        law.effect
        for law in theory.dynamic_by_action[action]
        if all(p in lits for p in law.preconditions)
    )


def transition(theory: ActionTheory, action: str, state: State) -> frozenset:
    """All successors of ``state`` under ``action`` (possibly none)."""
    key = (action, state)
    cache = theory._cache
    if key in cache:
        return cache[key]
    if not executable(theory, action, state):
        raise NotExecutable(f"{action} is not executable in {state}")
    result = frozenset(_successors(theory, action, state))
    cache[key] = result
    return result


def _successors(theory: ActionTheory, action: str, state: State) -> Iterator[State]:
    s = state.literals
    effects = direct_effects(theory, action, state)
    if any(l.complement() in effects for l in effects):
        return
    forced = frozenset(l for l in effects if l not in s)
    # any literal that changes must be a direct effect or a static-law head
    optional = sorted(l for l in theory.static_heads if l not in s and l not in forced)
    if len(optional) > MAX_OPTIONAL_FLIPS:
        raise PPlanError(f"too many candidate literal flips ({len(optional)}) for {action}")
    close = theory.static_index.close
    for size in range(len(optional) + 1):
        for extra in itertools.combinations(optional, size):
            changed = forced.union(extra)
            flipped = {l.complement() for l in changed}
            kept = s - flipped
            candidate = kept | changed
            if close(effects | kept) == candidate:
                yield State(candidate)


def initial_state(theory: ActionTheory) -> State:
    """Closure of ``I`` with unmentioned fluents completed to negative literals."""
    lits = set(static_closure(theory.initial, theory.static))
    for f in theory.fluents:
        pos = FluentLiteral(f)
        if pos not in lits and pos.complement() not in lits:
            lits.add(pos.complement())
    closed = theory.static_index.close(lits)
    if closed is None or closed != frozenset(lits):
        raise NotAState("completed initial state violates a static causal law")
    return State(frozenset(lits))


@dataclass
class AuditReport:
    ok: bool
    checked_states: int
    problems: list = field(default_factory=list)

    def __str__(self) -> str:
        if self.ok:
            return f"consistent ({self.checked_states} states checked)"
        lines = [f"INCONSISTENT ({len(self.problems)} problem(s), {self.checked_states} states checked)"]
        lines += [f"  {p}" for p in self.problems]
        return "\n".join(lines)


def all_states(theory: ActionTheory) -> Iterator[State]:
    """Every complete, consistent, statically closed literal set (exponential)."""
    close = theory.static_index.close
    for bits in itertools.product((False, True), repeat=len(theory.fluents)):
        lits = frozenset(FluentLiteral(f, b) for f, b in zip(theory.fluents, bits))
        if close(lits) == lits:
            yield State(lits)


def audit(theory: ActionTheory, exhaustive: bool = False, max_fluents: int = 18) -> AuditReport:
    """Check that ``s0`` is a state and that every executable action has a successor.

    By default only states reachable from ``s0`` are visited; ``exhaustive``
    enumerates every state (refused above ``max_fluents`` fluents).
    """
    try:
        s0 = initial_state(theory)
    except (NotAState, Inconsistent) as exc:
        return AuditReport(False, 0, [f"initial state: {exc}"])
    problems = []
    if exhaustive:
        if len(theory.fluents) > max_fluents:
            raise PPlanError(f"exhaustive audit refused: {len(theory.fluents)} fluents > {max_fluents}")
        states = list(all_states(theory))
    else:
        states = []
        seen = {s0}
        queue = deque([s0])
        while queue:
            s = queue.popleft()
            states.append(s)
            for a in theory.actions:
                if executable(theory, a, s):
                    for nxt in transition(theory, a, s):
                        if nxt not in seen:
                            seen.add(nxt)
                            queue.append(nxt)
    for s in states:
        for a in theory.actions:
            if executable(theory, a, s) and not transition(theory, a, s):
                problems.append(f"{a} has no successor in {s}")
    return AuditReport(not problems, len(states), problems)


def successors(theory: ActionTheory, action: str, state: State) -> list[State]:
    """Successor states in deterministic order; raises if there are none."""
    nxt = transition(theory, action, state)
    if not nxt:
        raise InconsistentTheory(f"{action} is executable in {state} but has no successor")
    return sorted(nxt, key=State.sort_key)
