"""Bottom-up evaluation of ground programs.

``stratified_eval`` computes the unique answer set of the satisfaction
fragment level by level.  Levels come from the nesting depth of
each named desire: ``satisfy`` atoms sit at ``5*depth + 2``, ``during``
atoms at ``5*depth + 4`` and everything else at 0.  A rule whose negative
body is not strictly below its head raises :class:`NotStratified`.

``is_answer_set`` is the general check through the Gelfond-Lifschitz
reduct and is what the planning encoding is validated with.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable

from ..errors import NotStratified
from .program import AspProgram, Atom, Choice, Rule

__all__ = ["desire_depths", "level", "stratified_eval", "least_model", "is_answer_set"]

_UNARY = ("negation", "next", "always", "eventually")
_BINARY = ("and", "or", "until")


def desire_depths(facts: Iterable[Atom]) -> dict[str, int]:
    """``depth`` for every constant named in a ``desire/1`` fact."""
    names = []
    kids: dict[str, tuple[str, list[str]]] = {}
    for a in facts:
        if a.predicate == "desire":
            names.append(a.args[0])
        elif a.predicate in _UNARY or a.predicate in _BINARY:
            kids[a.args[0]] = (a.predicate, list(a.args[1:]))
        elif a.predicate == "goal" and len(a.args) == 2:
            kids[a.args[0]] = ("goal", [a.args[1]])
    memo: dict[str, int] = {}

    def level_of(n: str, trail: frozenset = frozenset()) -> int:
        if n in memo:
            return memo[n]
        if n in trail:
            raise NotStratified(f"desire {n} refers to itself")
        kind, children = kids.get(n, ("leaf", []))
        if kind == "leaf":
            value = 0
        elif kind == "goal":
            value = level_of(children[0], trail | {n})
        else:
            value = max(level_of(c, trail | {n}) for c in children) + 1
        memo[n] = value
        return value

    return {n: level_of(n) for n in names}


def level(atom: Atom, depths: dict[str, int]) -> int:
    if atom.predicate == "satisfy":
        return 5 * depths.get(atom.args[0], 0) + 2
    if atom.predicate == "during":
        return 5 * depths.get(atom.args[0], 0) + 4
    return 0


def _positive_closure(rules: list[Rule], known: set[Atom], blocked) -> set[Atom]:
    """Least fixpoint of ``rules`` over ``known``; ``blocked(rule)`` drops a rule."""
    model = set(known)
    waiting: dict[Atom, list[int]] = defaultdict(list)
    missing = []
    queue = []
    for i, r in enumerate(rules):
        if blocked(r):
            missing.append(-1)
            continue
        need = [a for a in set(r.pos) if a not in model]
        missing.append(len(need))
        for a in need:
            waiting[a].append(i)
        if not need:
            queue.append(r.head)
    while queue:
        head = queue.pop()
        if head in model:
            continue
        model.add(head)
        for i in waiting.pop(head, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i].head)
    return model


def stratified_eval(program: AspProgram) -> set[Atom]:
    """Unique answer set of a program built from facts and plain rules."""
    rules = program.ground_rules()
    depths = desire_depths(program.facts)
    by_level: dict[int, list[Rule]] = defaultdict(list)
    for r in rules:
        if r.head is None:
            raise NotStratified("constraints are outside the stratified fragment")
        lh = level(r.head, depths)
        for a in r.pos:
            if level(a, depths) > lh:
                raise NotStratified(f"{r}: positive body above the head")
        for a in r.neg:
            if level(a, depths) >= lh:
                raise NotStratified(f"{r}: negated atom not strictly below the head")
        by_level[lh].append(r)
    model: set[Atom] = set()
    for lv in sorted(by_level):
        snapshot = frozenset(model)
        model = _positive_closure(by_level[lv], model, lambda r: any(a in snapshot for a in r.neg))
    return model


def least_model(rules: Iterable[Rule]) -> set[Atom]:
    """Least model of a positive program (negative bodies must be empty)."""
    rules = list(rules)
    if any(r.neg for r in rules):
        raise ValueError("least_model needs a positive program")
    return _positive_closure([r for r in rules if r.head is not None], set(), lambda r: False)


def is_answer_set(program: AspProgram, candidate: set[Atom]) -> bool:
    """Gelfond-Lifschitz check, with cardinality rules read as in lparse.

    A cardinality rule whose body holds contributes the chosen atoms of the
    candidate as facts, provided their number is within bounds.
    """
    candidate = set(candidate)
    reduct: list[Rule] = [Rule(a) for a in program.facts]
    for r in program.rules:
        if isinstance(r, Choice):
            body_ok = all(a in candidate for a in r.pos) and not any(a in candidate for a in r.neg)
            if not body_ok:
                continue
            chosen = [a for a in r.atoms if a in candidate]
            if not r.low <= len(chosen) <= r.high:
                return False
            reduct += [Rule(a) for a in chosen]
            continue
        if r.extra:
            raise ValueError(f"arithmetic rule outside the checker: {r}")
        if any(a in candidate for a in r.neg):
            continue
        if r.head is None:
            if all(a in candidate for a in r.pos):
                return False
            continue
        reduct.append(Rule(r.head, r.pos))
    return least_model(reduct) == candidate
