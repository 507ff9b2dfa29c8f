"""Ground logic programs and their lparse text form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

__all__ = ["Atom", "Rule", "Choice", "Maximize", "AspProgram", "term"]

Term = Union[str, int]


def term(value: Term) -> str:
    return str(value)


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(term(a) for a in self.args)})"


@dataclass(frozen=True)
class Rule:
    """``head :- pos, not neg, extra.``  A missing head makes a constraint.

    ``extra`` holds arithmetic conditions kept as text; rules that use it
    are not evaluated by the stratified oracle.
    """

    head: Atom | None
    pos: tuple = ()
    neg: tuple = ()
    extra: tuple = ()

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not (self.pos or self.neg or self.extra)

    def __str__(self) -> str:
        body = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg] + list(self.extra)
        head = "" if self.head is None else str(self.head)
        if not body:
            return f"{head}."
        return f"{head} :- {', '.join(body)}."


@dataclass(frozen=True)
class Choice:
    """Cardinality rule ``low { a1, ..., ak } high :- body.``"""

    low: int
    high: int
    atoms: tuple
    pos: tuple = ()
    neg: tuple = ()

    def __str__(self) -> str:
        inner = ", ".join(str(a) for a in self.atoms)
        body = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg]
        tail = f" :- {', '.join(body)}" if body else ""
        return f"{self.low} {{ {inner} }} {self.high}{tail}."


@dataclass(frozen=True)
class Maximize:
    """``maximize { a = w, not b = v, ... }.``  Entries are ``(atom, weight, negated)``."""

    entries: tuple

    def __str__(self) -> str:
        parts = [f"{'not ' if neg else ''}{atom} = {w}" for atom, w, neg in self.entries]
        return "maximize { " + ", ".join(parts) + " }."


@dataclass
class AspProgram:
    facts: list = field(default_factory=list)
    rules: list = field(default_factory=list)
    optimize: Maximize | None = None
    name_table: dict = field(default_factory=dict)  # constant -> printed subformula
    header: list = field(default_factory=list)
    sections: list = field(default_factory=list)  # (title, start index into rules)

    def add_facts(self, atoms: Iterable[Atom]) -> None:
        for a in atoms:
            self.facts.append(a)

    def section(self, title: str) -> None:
        self.sections.append((title, len(self.rules)))

    def extend(self, rules: Sequence[Rule | Choice]) -> None:
        self.rules.extend(rules)

    def ground_rules(self) -> list[Rule]:
        """Plain rules without arithmetic; facts included."""
        out = [Rule(a) for a in self.facts]
        out += [r for r in self.rules if isinstance(r, Rule) and not r.extra]
        return out

    def render(self) -> str:
        lines = [f"% {h}" for h in self.header]
        if self.name_table:
            lines.append("")
            lines.append("% names")
            lines += [f"%   {name} = {text}" for name, text in self.name_table.items()]
        if self.facts:
            lines.append("")
            lines.append("% facts")
            lines += [f"{a}." for a in self.facts]
        marks = dict()
        for title, start in self.sections:
            marks.setdefault(start, []).append(title)
        for i, r in enumerate(self.rules):
            for title in marks.get(i, ()):
                lines.append("")
                lines.append(f"% {title}")
            lines.append(str(r))
        for title in marks.get(len(self.rules), ()):
            lines.append("")
            lines.append(f"% {title}")
        if self.optimize is not None:
            lines.append("")
            lines.append(str(self.optimize))
        return "\n".join(lines) + "\n"
