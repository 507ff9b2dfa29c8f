"""Abstract syntax of the preference language and its derived constructions.

Three tiers:

* desires (temporal formulas over states and action occurrences),
* atomic preferences (lexicographic chains of desires),
* general preferences (``&``, ``|``, ``!!`` and ``<|`` over the tiers below).

Desires are kept in a canonical form where every subtree built only from
fluent literals with ``&&``, ``||`` and ``!`` is a single :class:`StateFormula`.
:func:`normalize_desire` produces that form and the parser emits it, which
makes ``parse(pretty(x)) == x`` hold exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .actions import (
    FALSE,
    TRUE,
    ActionTheory,
    FAnd,
    FConst,
    FluentLiteral,
    FNot,
    FOr,
    Formula,
    Lit,
)
from .errors import TooManyDesires, UnknownAction

MAX_MAXIM_DESIRES = 6


# -- desires -----------------------------------------------------------------


class Desire:
    __slots__ = ()


@dataclass(frozen=True)
class StateFormula(Desire):
    formula: Formula


@dataclass(frozen=True)
class Occ(Desire):
    action: str


@dataclass(frozen=True)
class Goal(Desire):
    formula: Formula


@dataclass(frozen=True)
class And(Desire):
    left: Desire
    right: Desire


@dataclass(frozen=True)
class Or(Desire):
    left: Desire
    right: Desire


@dataclass(frozen=True)
class Not(Desire):
    body: Desire


@dataclass(frozen=True)
class Next(Desire):
    body: Desire


@dataclass(frozen=True)
class Until(Desire):
    left: Desire
    right: Desire


@dataclass(frozen=True)
class Always(Desire):
    body: Desire


@dataclass(frozen=True)
class Eventually(Desire):
    body: Desire


# -- preferences -------------------------------------------------------------


class Preference:
    __slots__ = ()


@dataclass(frozen=True)
class Atomic(Preference):
    chain: tuple[Desire, ...]

    def __post_init__(self):
        if not self.chain:
            raise ValueError("an atomic preference needs at least one desire")


@dataclass(frozen=True)
class Conj(Preference):
    left: Preference
    right: Preference


@dataclass(frozen=True)
class Disj(Preference):
    left: Preference
    right: Preference


@dataclass(frozen=True)
class Neg(Preference):
    body: Preference


@dataclass(frozen=True)
class Chain(Preference):
    parts: tuple[Preference, ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("a preference chain needs at least two parts")


GeneralPreference = Union[Atomic, Conj, Disj, Neg, Chain]


def as_preference(x: Desire | Preference) -> Preference:
    """Lift a desire to a one-element atomic preference."""
    return Atomic((x,)) if isinstance(x, Desire) else x


def make_chain(parts: Sequence[Desire | Preference]) -> Preference:
    """Build ``p1 <| ... <| pk``.

    A single part is returned unchanged and a chain of plain desires becomes
    an :class:`Atomic` preference.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("empty chain")
    if all(isinstance(p, Desire) or (isinstance(p, Atomic) and len(p.chain) == 1) for p in parts):
        return Atomic(tuple(p if isinstance(p, Desire) else p.chain[0] for p in parts))
    if len(parts) == 1:
        return as_preference(parts[0])
    return Chain(tuple(as_preference(p) for p in parts))


# -- canonical form -------------------------------------------------------------


def f_and(parts: Sequence[Formula]) -> Formula:
    """Left-nested binary conjunction (the canonical shape)."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = FAnd((out, p))
    return out


def f_or(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = FOr((out, p))
    return out


def normalize_formula(f: Formula) -> Formula:
    """Binarise n-ary connectives, left-nested."""
    if isinstance(f, (FAnd, FOr)):
        parts = [normalize_formula(p) for p in f.parts]
        return f_and(parts) if isinstance(f, FAnd) else f_or(parts)
    if isinstance(f, FNot):
        return FNot(normalize_formula(f.body))
    return f


def normalize_desire(d: Desire) -> Desire:
    """Collapse fluent-only ``And``/``Or``/``Not`` subtrees into one state formula."""
    if isinstance(d, StateFormula):
        return StateFormula(normalize_formula(d.formula))
    if isinstance(d, Goal):
        return Goal(normalize_formula(d.formula))
    if isinstance(d, Occ):
        return d
    if isinstance(d, (And, Or)):
        left, right = normalize_desire(d.left), normalize_desire(d.right)
        if isinstance(left, StateFormula) and isinstance(right, StateFormula):
            op = FAnd if isinstance(d, And) else FOr
            return StateFormula(op((left.formula, right.formula)))
        return type(d)(left, right)
    if isinstance(d, Not):
        body = normalize_desire(d.body)
        if isinstance(body, StateFormula):
            return StateFormula(FNot(body.formula))
        return Not(body)
    if isinstance(d, (Next, Always, Eventually)):
        return type(d)(normalize_desire(d.body))
    if isinstance(d, Until):
        return Until(normalize_desire(d.left), normalize_desire(d.right))
    raise TypeError(f"not a desire: {d!r}")


def d_and(a: Desire, b: Desire) -> Desire:
    return normalize_desire(And(a, b))


def d_or(a: Desire, b: Desire) -> Desire:
    return normalize_desire(Or(a, b))


def d_not(a: Desire) -> Desire:
    return normalize_desire(Not(a))


def conjoin(items: Iterable[Desire]) -> Desire:
    items = list(items)
    if not items:
        return StateFormula(TRUE)
    out = items[0]
    for d in items[1:]:
        out = d_and(out, d)
    return out


def disjoin(items: Iterable[Desire]) -> Desire:
    items = list(items)
    if not items:
        return StateFormula(FALSE)
    out = items[0]
    for d in items[1:]:
        out = d_or(out, d)
    return out


def literal(text: str) -> StateFormula:
    return StateFormula(Lit(FluentLiteral.parse(text)))


# -- sugar -------------------------------------------------------------------


def strong_desire(first: Desire, second: Desire) -> Desire:
    """``first < second``: ``first`` holds and ``second`` does not."""
    return d_and(first, d_not(second))


def weak_desire(first: Desire, second: Desire) -> Desire:
    """``first <w second``: ``first`` holds or ``second`` does not."""
    return d_or(first, d_not(second))


def strong_chain(items: Sequence[Desire]) -> Desire:
    return conjoin(strong_desire(a, b) for a, b in zip(items, items[1:]))


def weak_chain(items: Sequence[Desire]) -> Desire:
    return conjoin(weak_desire(a, b) for a, b in zip(items, items[1:]))


def executable_formula(theory: ActionTheory, action: str) -> Formula:
    """Disjunction over the executability conditions of ``action``.

    Without conditions the action is never executable, so this is ``false``.
    """
    if action not in theory.action_set:
        raise UnknownAction(action)
    disjuncts = []
    for cond in theory.exec_by_action[action]:
        if not cond.body:
            disjuncts.append(TRUE)
        else:
            disjuncts.append(f_and([Lit(l) for l in cond.body]))
    return f_or(disjuncts)


def enabled_desire(first: str, second: str, theory: ActionTheory) -> Desire:
    """``first <e second``: when both are executable, ``first`` occurs and ``second`` does not."""
    both = FAnd((executable_formula(theory, first), executable_formula(theory, second)))
    return d_or(StateFormula(FNot(both)), strong_desire(Occ(first), Occ(second)))


def enabled_group(firsts: Sequence[str], seconds: Sequence[str], theory: ActionTheory) -> Desire:
    """``(a1 || ... || ak) <e (b1 || ... || bm)`` as the conjunction over all pairs."""
    return conjoin(enabled_desire(a, b, theory) for a in firsts for b in seconds)


def enabled_chain(groups: Sequence[Sequence[str]], theory: ActionTheory) -> Desire:
    """``g1 <e g2 <e ... <e gk`` as the conjunction of adjacent group desires."""
    return conjoin(enabled_group(a, b, theory) for a, b in zip(groups, groups[1:]))


def action_family(theory: ActionTheory, name: str) -> dict[tuple, str]:
    """Ground actions of the family ``name`` keyed by their argument tuples."""
    out = {}
    for action in theory.actions:
        head, _, rest = action.partition("(")
        if head == name:
            args = tuple(rest[:-1].split(",")) if rest else ()
            out[args] = action
    return out


def parametric_enabled(first: str, second: str, constants: Sequence[str], theory: ActionTheory) -> Desire:
    """Disjunction of ``first(c..) <e second(c..)`` over tuples of distinct constants."""
    fam1 = action_family(theory, first)
    fam2 = action_family(theory, second)
    if not fam1:
        raise UnknownAction(first)
    if not fam2:
        raise UnknownAction(second)
    arity = len(next(iter(fam1)))
    constants = list(dict.fromkeys(constants))
    disjuncts = []
    for combo in itertools.permutations(constants, arity):
        if combo in fam1 and combo in fam2:
            disjuncts.append(enabled_desire(fam1[combo], fam2[combo], theory))
    return disjoin(disjuncts)


# -- derived preferences -----------------------------------------------------------


def ch(desires: Sequence[Desire], perm: Sequence[int] | None = None) -> Atomic:
    """Suffix-conjunction chain: ``(d_i1 && ... && d_ik) <| (d_i2 && ...) <| ... <| d_ik``."""
    desires = list(desires)
    perm = list(range(len(desires))) if perm is None else list(perm)
    if sorted(perm) != list(range(len(desires))):
        raise ValueError("perm must be a permutation of the desire indices")
    ordered = [desires[i] for i in perm]
    return Atomic(tuple(conjoin(ordered[j:]) for j in range(len(ordered))))


def maxim(desires: Sequence[Desire]) -> Preference:
    """``|`` over :func:`ch` for every permutation, preferring more desires satisfied."""
    desires = list(desires)
    if not 1 <= len(desires) <= MAX_MAXIM_DESIRES:
        raise TooManyDesires(
            f"maxim needs between 1 and {MAX_MAXIM_DESIRES} desires, got {len(desires)}"
            f" ({math.factorial(len(desires)) if desires else 0} permutations)"
        )
    chains = [ch(desires, p) for p in itertools.permutations(range(len(desires)))]
    out: Preference = chains[0]
    for c in chains[1:]:
        out = Disj(out, c)
    return out


def temporal_order_desire(first: Formula, second: Formula) -> Desire:
    """``first`` becomes true no later than ``second`` and ``second`` eventually follows."""
    a, b = StateFormula(normalize_formula(first)), StateFormula(normalize_formula(second))
    return d_and(Eventually(d_and(a, Eventually(b))), Until(d_not(b), a))


# -- traversal helpers ---------------------------------------------------------


def desire_children(d: Desire) -> tuple[Desire, ...]:
    if isinstance(d, (And, Or, Until)):
        return (d.left, d.right)
    if isinstance(d, (Not, Next, Always, Eventually)):
        return (d.body,)
    return ()


def preference_children(p: Preference) -> tuple[Preference, ...]:
    if isinstance(p, (Conj, Disj)):
        return (p.left, p.right)
    if isinstance(p, Neg):
        return (p.body,)
    if isinstance(p, Chain):
        return p.parts
    return ()


def preference_desires(p: Preference) -> list[Desire]:
    if isinstance(p, Atomic):
        return list(p.chain)
    out = []
    for child in preference_children(p):
        out.extend(preference_desires(child))
    return out


def desire_actions(d: Desire) -> set[str]:
    if isinstance(d, Occ):
        return {d.action}
    out: set[str] = set()
    for child in desire_children(d):
        out |= desire_actions(child)
    return out


def is_temporal_free(d: Desire) -> bool:
    if isinstance(d, (Next, Until, Always, Eventually)):
        return False
    return all(is_temporal_free(c) for c in desire_children(d))


# -- pretty printing -------------------------------------------------------------


def _fatom(f: Formula) -> bool:
    return isinstance(f, (Lit, FConst))


def format_fluent_formula(f: Formula) -> str:
    if isinstance(f, Lit):
        return str(f.literal)
    if isinstance(f, FConst):
        return "true" if f.value else "false"
    if isinstance(f, FNot):
        inner = format_fluent_formula(f.body)
        # "!!" is its own token, so a nested negation is always parenthesised
        return "!" + (inner if _fatom(f.body) else f"({inner})")
    if isinstance(f, (FAnd, FOr)):
        op = " && " if isinstance(f, FAnd) else " || "
        if len(f.parts) == 1:
            # a one-operand connective has no concrete syntax of its own
            return format_fluent_formula(f.parts[0])
        return op.join(
            format_fluent_formula(p) if _fatom(p) or isinstance(p, FNot) else f"({format_fluent_formula(p)})"
            for p in f.parts
        )
    raise TypeError(f"not a fluent formula: {f!r}")


def _datom(d: Desire) -> bool:
    if isinstance(d, StateFormula):
        return _fatom(d.formula) or isinstance(d.formula, FNot)
    return isinstance(d, (Occ, Goal, Next, Always, Eventually, Until, Not))


def format_desire(d: Desire) -> str:
    if isinstance(d, StateFormula):
        return format_fluent_formula(d.formula)
    if isinstance(d, Occ):
        return f"occ({d.action})"
    if isinstance(d, Goal):
        return f"goal({format_fluent_formula(d.formula)})"
    if isinstance(d, (And, Or)):
        op = " && " if isinstance(d, And) else " || "
        return op.join(_wrap_desire(x) for x in (d.left, d.right))
    if isinstance(d, Not):
        inner = format_desire(d.body)
        bare = _datom(d.body) and not isinstance(d.body, Not)
        if isinstance(d.body, StateFormula) and isinstance(d.body.formula, FNot):
            bare = False
        return "!" + (inner if bare else f"({inner})")
    if isinstance(d, Next):
        return f"next({format_desire(d.body)})"
    if isinstance(d, Always):
        return f"always({format_desire(d.body)})"
    if isinstance(d, Eventually):
        return f"eventually({format_desire(d.body)})"
    if isinstance(d, Until):
        return f"until({format_desire(d.left)}, {format_desire(d.right)})"
    raise TypeError(f"not a desire: {d!r}")


def _wrap_desire(d: Desire) -> str:
    text = format_desire(d)
    return text if _datom(d) else f"({text})"


def format_preference(p: Preference | Desire) -> str:
    if isinstance(p, Desire):
        return format_desire(p)
    if isinstance(p, Atomic):
        return " <| ".join(_wrap_desire(d) for d in p.chain)
    if isinstance(p, Conj):
        return f"{_wrap_pref(p.left)} & {_wrap_pref(p.right)}"
    if isinstance(p, Disj):
        return f"{_wrap_pref(p.left)} | {_wrap_pref(p.right)}"
    if isinstance(p, Neg):
        return "!!" + _wrap_pref(p.body)
    if isinstance(p, Chain):
        return " <| ".join(_wrap_pref(x) for x in p.parts)
    raise TypeError(f"not a preference: {p!r}")


def _wrap_pref(p: Preference) -> str:
    if isinstance(p, Atomic) and len(p.chain) == 1:
        return _wrap_desire(p.chain[0])
    if isinstance(p, Neg):
        return format_preference(p)
    return f"({format_preference(p)})"
