"""Translation of planning problems, desires and preferences to ground lparse text.

Every desire and preference node gets a constant: ``n_d1, n_d2, ...`` for
desires and ``n_p1, n_p2, ...`` for preferences, counted in preorder.  Fluent
literals stand for themselves (``f`` or ``neg(f)``).  All time points are
instantiated here, so the output needs no grounder-side domain predicates.
"""

from __future__ import annotations

import hashlib
from typing import Mapping, Sequence

from .. import __version__
from ..actions import (
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
    initial_state,
    to_dnf,
)
from ..planner import Trajectory
from ..pp import (
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
    format_desire,
    format_fluent_formula,
    format_preference,
)
from ..weights import _checked, _fold, max_weight
from .program import AspProgram, Atom, Choice, Maximize, Rule

__all__ = [
    "literal_term",
    "DesireTable",
    "encode_desire",
    "emit_sat_rules",
    "emit_pref_rules",
    "encode_planning",
    "trajectory_facts",
    "sat_program",
    "emit_program",
    "affine_weight",
]


def literal_term(lit: FluentLiteral) -> str:
    return lit.fluent if lit.positive else f"neg({lit.fluent})"


def _A(pred: str, *args) -> Atom:
    return Atom(pred, tuple(args))


class DesireTable:
    """Names, structure facts and nesting depth of encoded desires."""

    def __init__(self) -> None:
        self.facts: list[Atom] = []
        self._seen: set[Atom] = set()
        self.names: dict[str, str] = {}  # constant -> printed subformula
        self.kinds: dict[str, tuple] = {}  # constant -> (kind, *children or payload)
        self.objects: dict[str, Desire] = {}  # constant -> the desire it names
        self._count = 0

    def _fact(self, atom: Atom) -> None:
        if atom not in self._seen:
            self._seen.add(atom)
            self.facts.append(atom)

    def _fresh(self, text: str) -> str:
        self._count += 1
        name = f"n_d{self._count}"
        self.names[name] = text
        return name

    def _node(self, name: str, kind: str, *rest: str) -> str:
        self.kinds[name] = (kind, *rest)
        self._fact(_A("desire", name))
        if kind != "false":
            self._fact(_A(kind, name, *rest))
        return name

    # fluent formulas ------------------------------------------------------------

    def formula(self, f: Formula) -> str:
        name = self._formula(f)
        self.objects.setdefault(name, StateFormula(f))
        return name

    def _formula(self, f: Formula) -> str:
        if isinstance(f, Lit):
            return self._literal(f.literal)
        if isinstance(f, FNot) and isinstance(f.body, Lit):
            return self._literal(f.body.literal.complement())
        if isinstance(f, FConst):
            name = self._fresh(format_fluent_formula(f))
            if f.value:
                inner = self._fresh("false")
                self._node(inner, "false")
                self.objects[inner] = StateFormula(FALSE)
                return self._node(name, "negation", inner)
            return self._node(name, "false")
        if isinstance(f, FNot):
            name = self._fresh(format_fluent_formula(f))
            return self._node(name, "negation", self.formula(f.body))
        if isinstance(f, (FAnd, FOr)):
            kind = "and" if isinstance(f, FAnd) else "or"
            return self._fold(kind, list(f.parts))
        raise TypeError(f"not a fluent formula: {f!r}")

    def _fold(self, kind: str, parts: list) -> str:
        if len(parts) == 1:
            return self.formula(parts[0])
        whole = (FAnd if kind == "and" else FOr)(tuple(parts))
        name = self._fresh(format_fluent_formula(whole))
        left = self._fold(kind, parts[:-1])
        right = self.formula(parts[-1])
        self.objects[name] = StateFormula(whole)
        return self._node(name, kind, left, right)

    def _literal(self, lit: FluentLiteral) -> str:
        t = literal_term(lit)
        self.kinds.setdefault(t, ("literal",))
        self._fact(_A("desire", t))
        self._fact(_A("literal", t))
        return t

    # desires --------------------------------------------------------------------------

    def desire(self, d: Desire) -> str:
        if isinstance(d, StateFormula):
            return self.formula(d.formula)
        name = self._desire(d)
        self.objects[name] = d
        return name

    def _desire(self, d: Desire) -> str:
        name = self._fresh(format_desire(d))
        if isinstance(d, Occ):
            return self._node(name, "happen", d.action)
        if isinstance(d, Goal):
            return self._node(name, "goal", self.formula(d.formula))
        if isinstance(d, (And, Or, Until)):
            kind = {And: "and", Or: "or", Until: "until"}[type(d)]
            left = self.desire(d.left)
            right = self.desire(d.right)
            return self._node(name, kind, left, right)
        kind = {Not: "negation", Next: "next", Always: "always", Eventually: "eventually"}.get(type(d))
        if kind is None:
            raise TypeError(f"not a desire: {d!r}")
        return self._node(name, kind, self.desire(d.body))

    def depth(self, name: str) -> int:
        """Nesting depth used by the stratification argument."""
        kind, *rest = self.kinds[name]
        if kind in ("literal", "happen", "false"):
            return 0
        if kind == "goal":
            return self.depth(rest[0])
        return max(self.depth(c) for c in rest) + 1


def encode_desire(d: Desire, table: DesireTable | None = None) -> tuple[str, DesireTable]:
    """Name ``d`` and record its structure facts; returns ``(name, table)``."""
    table = table or DesireTable()
    return table.desire(d), table


# -- satisfaction rules ------------------------------------------------------------


def emit_sat_rules(table: DesireTable, length: int) -> list[Rule]:
    """Satisfaction and ``during`` rules for every named desire over ``0..length``."""
    rules: list[Rule] = []
    L = length
    times = range(L + 1)

    def sat(f, t):
        return _A("satisfy", f, t)

    def during(f, t, t1):
        return _A("during", f, t, t1)

    for f, (kind, *rest) in table.kinds.items():
        des = _A("desire", f)
        if kind == "goal":
            (f1,) = rest
            rules += [Rule(sat(f, t), (des, _A("goal", f, f1), sat(f1, L))) for t in times]
        elif kind == "happen":
            (a,) = rest
            rules += [Rule(sat(f, t), (des, _A("happen", f, a), _A("occ", a, t))) for t in times]
        elif kind == "literal":
            rules += [Rule(sat(f, t), (des, _A("literal", f), _A("holds", f, t))) for t in times]
        elif kind == "and":
            f1, f2 = rest
            s = _A("and", f, f1, f2)
            rules += [Rule(sat(f, t), (des, s, sat(f1, t), sat(f2, t))) for t in times]
        elif kind == "or":
            f1, f2 = rest
            s = _A("or", f, f1, f2)
            rules += [Rule(sat(f, t), (des, s, sat(f1, t))) for t in times]
            rules += [Rule(sat(f, t), (des, s, sat(f2, t))) for t in times]
        elif kind == "negation":
            (f1,) = rest
            s = _A("negation", f, f1)
            rules += [Rule(sat(f, t), (des, s), (sat(f1, t),)) for t in times]
        elif kind == "until":
            f1, f2 = rest
            s = _A("until", f, f1, f2)
            for t in times:
                for t1 in range(t + 1, L + 1):
                    rules.append(Rule(sat(f, t), (des, s, during(f1, t, t1 - 1), sat(f2, t1))))
            rules += [Rule(sat(f, t), (des, s, sat(f2, t))) for t in times]
        elif kind == "always":
            (f1,) = rest
            s = _A("always", f, f1)
            rules += [Rule(sat(f, t), (des, s, during(f1, t, L))) for t in times]
        elif kind == "next":
            (f1,) = rest
            s = _A("next", f, f1)
            rules += [Rule(sat(f, t), (des, s, sat(f1, t + 1))) for t in range(L)]
        elif kind == "eventually":
            (f1,) = rest
            s = _A("eventually", f, f1)
            rules += [Rule(sat(f, t), (des, s, sat(f1, t1))) for t in times for t1 in range(t, L + 1)]
        elif kind != "false":
            raise ValueError(f"unknown desire kind {kind}")
    for f in table.kinds:
        des = _A("desire", f)
        for t in times:
            for t1 in range(t + 1, L + 1):
                rules.append(Rule(during(f, t, t1), (des, sat(f, t), during(f, t + 1, t1))))
            rules.append(Rule(during(f, t, t), (des, sat(f, t))))
    return rules


# -- weights -------------------------------------------------------------------------


def affine_weight(p: Preference | Desire) -> tuple[int, list[int]]:
    """``weight = offset + sum(c_i * x_i)`` over leaf satisfaction bits in preorder."""
    p = as_preference(p)
    if isinstance(p, Atomic):
        k = len(p.chain)
        return 0, [_checked(2 ** (k - 1 - r)) for r in range(k)]
    if isinstance(p, (Conj, Disj)):
        c1, v1 = affine_weight(p.left)
        c2, v2 = affine_weight(p.right)
        return c1 + c2, v1 + v2
    if isinstance(p, Neg):
        c, v = affine_weight(p.body)
        top = max_weight(p.body)
        return top - 1 - c, [-x for x in v]
    if isinstance(p, Chain):
        if len(p.parts) > 2:
            p = _fold(p.parts)
        c1, v1 = affine_weight(p.parts[0])
        c2, v2 = affine_weight(p.parts[1])
        m2 = max_weight(p.parts[1])
        return _checked(m2 * c1 + c2), [_checked(m2 * abs(x)) * (1 if x >= 0 else -1) for x in v1] + v2
    raise TypeError(f"not a preference: {p!r}")


class _PrefEmitter:
    def __init__(self, table: DesireTable, program: AspProgram) -> None:
        self.table = table
        self.program = program
        self.count = 0
        self.leaves: list[str] = []
        self.rules: list[Rule] = []

    def fresh(self, text: str) -> str:
        self.count += 1
        name = f"n_p{self.count}"
        self.program.name_table[name] = text
        self.program.facts.append(_A("preference", name))
        return name

    def basic(self, d: Desire) -> str:
        name = self.table.desire(d)
        self.leaves.append(name)
        self.rules += [
            Rule(_A("w", name, 1), (_A("satisfy", name, 0),)),
            Rule(_A("w", name, 0), (), (_A("satisfy", name, 0),)),
            Rule(_A("max", name, 2)),
        ]
        return name

    def node(self, p: Preference) -> str:
        if isinstance(p, Chain) and len(p.parts) > 2:
            p = _fold(p.parts)
        name = self.fresh(format_preference(p))
        if isinstance(p, Atomic):
            k = len(p.chain)
            kids = [self.basic(d) for d in p.chain]
            terms = []
            for r in range(k):
                coef = _checked(2 ** (k - 1 - r))
                terms.append(f"S{r + 1}" if coef == 1 else f"{coef}*S{r + 1}")
            body = tuple(_A("w", kid, f"S{r + 1}") for r, kid in enumerate(kids))
            self.rules.append(Rule(_A("w", name, "S"), body, (), (f"S = {' + '.join(terms)}",)))
            self.rules.append(Rule(_A("max", name, _checked(2**k))))
            return name
        if isinstance(p, (Conj, Disj)):
            n1, n2 = self.node(p.left), self.node(p.right)
            self.rules.append(
                Rule(_A("w", name, "S"), (_A("w", n1, "N1"), _A("w", n2, "N2")), (), ("S = N1 + N2",))
            )
            self.rules.append(
                Rule(_A("max", name, "S"), (_A("max", n1, "N1"), _A("max", n2, "N2")), (), ("S = N1 + N2",))
            )
            return name
        if isinstance(p, Neg):
            n1 = self.node(p.body)
            self.rules.append(
                Rule(_A("w", name, "S"), (_A("w", n1, "N"), _A("max", n1, "M")), (), ("S = M - N - 1",))
            )
            self.rules.append(Rule(_A("max", name, "S"), (_A("max", n1, "S"),), (), ()))
            return name
        if isinstance(p, Chain):
            n1, n2 = self.node(p.parts[0]), self.node(p.parts[1])
            self.rules.append(
                Rule(
                    _A("w", name, "S"),
                    (_A("w", n1, "N1"), _A("w", n2, "N2"), _A("max", n2, "M2")),
                    (),
                    ("S = M2*N1 + N2",),
                )
            )
            self.rules.append(
                Rule(_A("max", name, "S"), (_A("max", n1, "N1"), _A("max", n2, "N2")), (), ("S = N2*N1 + N2",))
            )
            return name
        raise TypeError(f"not a preference: {p!r}")


def emit_pref_rules(pref: Preference | Desire, table: DesireTable, program: AspProgram) -> tuple[list[Rule], Maximize]:
    """Weight rules for ``pref`` plus the optimization statement.

    A lone basic desire is optimized directly on its satisfaction atom.
    Otherwise the statement weights leaf satisfaction atoms with the affine
    coefficients of the root weight, which orders answer sets exactly as
    ``w(root, S)`` does.
    """
    pref = as_preference(pref)
    max_weight(pref)  # overflow guard on every precomputed constant
    if isinstance(pref, Atomic) and len(pref.chain) == 1:
        name = table.desire(pref.chain[0])
        sat = _A("satisfy", name, 0)
        return [], Maximize(((sat, 1, False), (sat, 0, True)))
    em = _PrefEmitter(table, program)
    em.node(pref)
    _, coefs = affine_weight(pref)
    entries = []
    for leaf, c in zip(em.leaves, coefs):
        sat = _A("satisfy", leaf, 0)
        if c > 0:
            entries.append((sat, c, False))
        elif c < 0:
            entries.append((sat, -c, True))
    return em.rules, Maximize(tuple(entries))


# -- planning problem --------------------------------------------------------------


def _holds(lit: FluentLiteral, t: int) -> Atom:
    return _A("holds", literal_term(lit), t)


def encode_planning(theory: ActionTheory, length: int) -> tuple[list[Atom], list]:
    """Facts and rules whose answer sets are the trajectories of exactly ``length`` steps."""
    L = length
    facts = [_A("fluent", f) for f in theory.fluents] + [_A("action", a) for a in theory.actions]
    s0 = initial_state(theory)
    facts += [_holds(l, 0) for l in sorted(s0.literals)]
    rules: list = []
    for t in range(L):
        for law in theory.dynamic:
            body = (_A("occ", law.action, t), *(_holds(p, t) for p in law.preconditions))
            rules.append(Rule(_holds(law.effect, t + 1), body))
    for t in range(L + 1):
        for law in theory.static:
            rules.append(Rule(_holds(law.head, t), tuple(_holds(b, t) for b in law.body)))
    for t in range(L):
        for f in theory.fluents:
            for lit in (FluentLiteral(f), FluentLiteral(f, False)):
                rules.append(Rule(_holds(lit, t + 1), (_holds(lit, t),), (_holds(lit.complement(), t + 1),)))
    for t in range(L + 1):
        for f in theory.fluents:
            rules.append(Rule(None, (_holds(FluentLiteral(f), t), _holds(FluentLiteral(f, False), t))))
    for t in range(L):
        for cond in theory.exec:
            rules.append(Rule(_A("exec", cond.action, t), tuple(_holds(b, t) for b in cond.body)))
    for t in range(L):
        if theory.actions:
            rules.append(Choice(1, 1, tuple(_A("occ", a, t) for a in theory.actions)))
        for a in theory.actions:
            rules.append(Rule(None, (_A("occ", a, t),), (_A("exec", a, t),)))
    reached = _A("goal_reached")
    if theory.goal == TRUE:
        rules.append(Rule(reached))
    elif theory.goal != FALSE:
        for conj in to_dnf(theory.goal):
            rules.append(Rule(reached, tuple(_holds(l, L) for l in conj)))
    rules.append(Rule(None, (), (reached,)))
    return facts, rules


def trajectory_facts(t: Trajectory) -> list[Atom]:
    """``occ(a_i, i-1)`` for every step and ``holds(l, i)`` for every literal of ``s_i``."""
    facts = [_A("occ", a, i) for i, a in enumerate(t.actions)]
    for i, s in enumerate(t.states):
        facts += [_holds(l, i) for l in sorted(s.literals)]
    return facts


def sat_program(desires: Sequence[Desire], t: Trajectory | None, length: int | None = None) -> tuple[AspProgram, list[str]]:
    """Desire facts, satisfaction rules and the trajectory facts of ``t``."""
    table = DesireTable()
    names = [table.desire(d) for d in desires]
    if length is None:
        length = len(t.actions) if t is not None else 0
    program = AspProgram()
    program.name_table = dict(table.names)
    program.add_facts(table.facts)
    if t is not None:
        program.add_facts(trajectory_facts(t))
    program.extend(emit_sat_rules(table, length))
    return program, names


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def emit_program(
    theory: ActionTheory,
    pref: Preference | Desire,
    length: int,
    sources: Mapping[str, str] | None = None,
) -> AspProgram:
    """The planning encoding plus desire, satisfaction and weight rules."""
    program = AspProgram()
    program.header = [f"pplan {__version__} lparse output", f"length {length}"]
    for label, text in sorted((sources or {}).items()):
        program.header.append(f"{label} sha256 {_digest(text)}")
    table = DesireTable()
    pref = as_preference(pref)
    pref_rules, optimize = emit_pref_rules(pref, table, program)
    pref_facts, program.facts = program.facts, []
    facts, plan_rules = encode_planning(theory, length)
    program.add_facts(facts)
    program.add_facts(table.facts)
    program.add_facts(pref_facts)
    names = dict(table.names)
    names.update(program.name_table)
    program.name_table = dict(sorted(names.items(), key=lambda kv: (kv[0][:3], int(kv[0][3:]))))
    program.section("planning")
    program.extend(plan_rules)
    program.section("satisfaction")
    program.extend(emit_sat_rules(table, length))
    if pref_rules:
        program.section("weights")
        program.extend(pref_rules)
    program.optimize = optimize
    return program
