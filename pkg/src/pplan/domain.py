"""Domain file parser and grounder.

A domain file holds one statement per line (``%`` starts a comment)::

    sort location = {home, school, airport}.
    sort money = 0..10.
    fluent at(location).
    action walk(location, location).
    walk(L1,L2) causes at(L2) if at(L1), road(L1,L2).
    caused -at(L2) if at(L1), L1 != L2.
    walk(L1,L2) executable_if at(L1).
    initially at(home).
    goal at(school) & has_coffee.

Upper-case identifiers are variables.  Their sort is taken from the argument
positions they occupy in declared fluents and actions; grounding expands every
schema over the cartesian product of those sorts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .actions import (
    TRUE,
    FALSE,
    ActionTheory,
    DynamicLaw,
    ExecCondition,
    FAnd,
    FluentLiteral,
    FNot,
    FOr,
    Formula,
    Lit,
    StaticLaw,
)
from .errors import EmptySort, ResolutionError, UnboundVariable
from .lexer import TokenStream, tokenize

__all__ = ["DomainSpec", "parse_domain", "ground", "load_domain", "format_atom"]


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return format_atom(self.name, [str(a) for a in self.args])


@dataclass(frozen=True)
class SLit:
    atom: Atom
    positive: bool = True


@dataclass(frozen=True)
class Constraint:
    left: object
    op: str  # "!=" or "=="
    right: object


@dataclass
class Statement:
    kind: str  # dynamic, static, exec, initially
    head: object
    body: list
    line: int
    effect: SLit | None = None


@dataclass
class DomainSpec:
    """A parsed, still schematic domain."""

    sorts: dict = field(default_factory=dict)
    fluents: dict = field(default_factory=dict)  # name -> tuple of sort names
    actions: dict = field(default_factory=dict)
    statements: list = field(default_factory=list)
    goal: object = None
    goal_line: int = 0
    source: str = "<input>"


def format_atom(name: str, args) -> str:
    args = list(args)
    return f"{name}({','.join(args)})" if args else name


# -- parsing -------------------------------------------------------------------

_KEYWORDS = {"sort", "fluent", "action", "caused", "initially", "goal"}


def parse_domain(text: str, source: str = "<input>") -> DomainSpec:
    ts = TokenStream(tokenize(text, source), source)
    decl = DomainSpec(source=source)
    while not ts.at_eof():
        _statement(ts, decl)
    return decl


def _statement(ts: TokenStream, decl: DomainSpec) -> None:
    tok = ts.peek()
    if tok.kind == "ident" and tok.value in _KEYWORDS and not ts.at("(", 1) or (
        tok.value == "initially" and tok.kind == "ident"
    ):
        kw = ts.next().value
        if kw == "sort":
            _sort_decl(ts, decl)
        elif kw in ("fluent", "action"):
            _signature_decl(ts, decl, kw)
        elif kw == "caused":
            head = _literal(ts)
            body = _body(ts) if ts.accept("if") else []
            decl.statements.append(Statement("static", head, body, tok.line))
        elif kw == "initially":
            paren = ts.accept("(")
            lit = _literal(ts)
            if paren:
                ts.expect(")")
            decl.statements.append(Statement("initially", lit, [], tok.line))
        elif kw == "goal":
            if decl.goal is not None:
                ts.error("goal declared twice", tok)
            decl.goal = _formula(ts)
            decl.goal_line = tok.line
        ts.expect(".")
        return
    # law statements start with a term or a literal
    negative = ts.accept("-") is not None
    atom = _atom(ts)
    if ts.accept("causes"):
        if negative:
            ts.error("an action cannot be negated", tok)
        effect = _literal(ts)
        body = _body(ts) if ts.accept("if") else []
        decl.statements.append(Statement("dynamic", atom, body, tok.line, effect=effect))
    elif ts.accept("executable_if"):
        if negative:
            ts.error("an action cannot be negated", tok)
        body = _body(ts)
        decl.statements.append(Statement("exec", atom, body, tok.line))
    elif ts.accept("if"):
        body = _body(ts)
        decl.statements.append(Statement("static", SLit(atom, not negative), body, tok.line))
    else:
        ts.error(f"expected 'causes', 'executable_if' or 'if', found {ts.peek()}")
    ts.expect(".")


def _sort_decl(ts: TokenStream, decl: DomainSpec) -> None:
    name_tok = ts.expect_kind("ident", "sort name")
    ts.expect("=")
    if ts.accept("{"):
        consts = []
        if not ts.at("}"):
            consts.append(_constant(ts))
            while ts.accept(","):
                consts.append(_constant(ts))
        ts.expect("}")
    else:
        lo = int(ts.expect_kind("number", "range start").value)
        ts.expect_kind("dotdot", "'..'")
        hi = int(ts.expect_kind("number", "range end").value)
        consts = [str(v) for v in range(lo, hi + 1)]
    if name_tok.value in decl.sorts:
        ts.error(f"sort {name_tok.value} declared twice", name_tok)
    decl.sorts[name_tok.value] = tuple(dict.fromkeys(consts))


def _signature_decl(ts: TokenStream, decl: DomainSpec, kind: str) -> None:
    table = decl.fluents if kind == "fluent" else decl.actions
    while True:
        name_tok = ts.expect_kind("ident", f"{kind} name")
        sorts = []
        if ts.accept("("):
            sorts.append(ts.expect_kind("ident", "sort name").value)
            while ts.accept(","):
                sorts.append(ts.expect_kind("ident", "sort name").value)
            ts.expect(")")
        if name_tok.value in decl.fluents or name_tok.value in decl.actions:
            ts.error(f"{name_tok.value} declared twice", name_tok)
        table[name_tok.value] = tuple(sorts)
        if not ts.accept(","):
            break


def _constant(ts: TokenStream) -> str:
    tok = ts.peek()
    if tok.kind in ("ident", "number"):
        return ts.next().value
    ts.error(f"expected a constant, found {tok}")


def _term(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == "var":
        return Var(ts.next().value)
    return _constant(ts)


def _atom(ts: TokenStream) -> Atom:
    tok = ts.expect_kind("ident", "a name")
    args = []
    if ts.accept("("):
        args.append(_term(ts))
        while ts.accept(","):
            args.append(_term(ts))
        ts.expect(")")
    return Atom(tok.value, tuple(args), tok.line, tok.column)


def _literal(ts: TokenStream) -> SLit:
    negative = ts.accept("-") is not None
    return SLit(_atom(ts), not negative)


def _body(ts: TokenStream) -> list:
    if ts.accept("true"):
        return []
    items = [_body_item(ts)]
    while ts.accept(","):
        items.append(_body_item(ts))
    return items


def _body_item(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == "var" or (tok.kind in ("ident", "number") and ts.peek(1).value in ("!=", "==")):
        left = _term(ts)
        op_tok = ts.next()
        if op_tok.value not in ("!=", "=="):
            ts.error(f"expected '!=' or '==', found {op_tok}", op_tok)
        return Constraint(left, op_tok.value, _term(ts))
    return _literal(ts)


def _formula(ts: TokenStream):
    left = _conj(ts)
    parts = [left]
    while ts.accept("|"):
        parts.append(_conj(ts))
    return parts[0] if len(parts) == 1 else ("or", parts)


def _conj(ts: TokenStream):
    parts = [_unary(ts)]
    while ts.accept("&"):
        parts.append(_unary(ts))
    return parts[0] if len(parts) == 1 else ("and", parts)


def _unary(ts: TokenStream):
    if ts.accept("!"):
        return ("not", _unary(ts))
    if ts.accept("("):
        inner = _formula(ts)
        ts.expect(")")
        return inner
    if ts.accept("true"):
        return ("const", True)
    if ts.accept("false"):
        return ("const", False)
    return ("lit", _literal(ts))


# -- grounding -----------------------------------------------------------------


def _err(exc_type, message: str, decl: DomainSpec, line: int):
    if exc_type is ResolutionError:
        return ResolutionError(message, line, 1, decl.source)
    return exc_type(f"{decl.source}:{line}: {message}")


def _sort_constants(decl: DomainSpec, sort: str, line: int) -> tuple:
    if sort not in decl.sorts:
        raise _err(EmptySort, f"undeclared sort {sort!r}", decl, line)
    consts = decl.sorts[sort]
    if not consts:
        raise _err(EmptySort, f"sort {sort!r} is empty", decl, line)
    return consts


def _signature(decl: DomainSpec, atom: Atom, kind: str, line: int) -> tuple:
    table = decl.fluents if kind == "fluent" else decl.actions
    if atom.name not in table:
        other = "action" if kind == "fluent" else "fluent"
        hint = f" ({atom.name} is an {other})" if atom.name in (decl.actions if kind == "fluent" else decl.fluents) else ""
        raise _err(ResolutionError, f"unknown {kind} {atom.name!r}{hint}", decl, line)
    sorts = table[atom.name]
    if len(sorts) != len(atom.args):
        raise _err(
            ResolutionError,
            f"{kind} {atom.name} expects {len(sorts)} argument(s), got {len(atom.args)}",
            decl,
            line,
        )
    return sorts


def _type_vars(decl: DomainSpec, stmt_atoms, line: int) -> dict:
    """Map each variable to its candidate constants (intersection over positions)."""
    domains: dict[str, tuple] = {}
    for atom, kind in stmt_atoms:
        sorts = _signature(decl, atom, kind, line)
        for arg, sort in zip(atom.args, sorts):
            consts = _sort_constants(decl, sort, line)
            if isinstance(arg, Var):
                if arg.name in domains:
                    allowed = set(consts)
                    domains[arg.name] = tuple(c for c in domains[arg.name] if c in allowed)
                else:
                    domains[arg.name] = consts
            elif arg not in consts:
                raise _err(ResolutionError, f"constant {arg!r} is not of sort {sort!r}", decl, line)
    return domains


def _vars_of(items) -> list[str]:
    names: list[str] = []

    def add(term):
        if isinstance(term, Var) and term.name not in names:
            names.append(term.name)

    for item in items:
        if isinstance(item, Atom):
            for a in item.args:
                add(a)
        elif isinstance(item, SLit):
            for a in item.atom.args:
                add(a)
        elif isinstance(item, Constraint):
            add(item.left)
            add(item.right)
    return names


def _subst(term, binding):
    return binding[term.name] if isinstance(term, Var) else term


def _ground_atom(atom: Atom, binding) -> str:
    return format_atom(atom.name, [_subst(a, binding) for a in atom.args])


def _ground_lit(lit: SLit, binding) -> FluentLiteral:
    return FluentLiteral(_ground_atom(lit.atom, binding), lit.positive)


def _bindings(decl: DomainSpec, stmt: Statement):
    atoms = []
    if stmt.kind in ("dynamic", "exec"):
        atoms.append((stmt.head, "action"))
    if stmt.kind in ("static", "initially"):
        atoms.append((stmt.head.atom, "fluent"))
    if stmt.effect is not None:
        atoms.append((stmt.effect.atom, "fluent"))
    for item in stmt.body:
        if isinstance(item, SLit):
            atoms.append((item.atom, "fluent"))
    domains = _type_vars(decl, atoms, stmt.line)
    order = _vars_of([a for a, _ in atoms] + list(stmt.body))
    for name in order:
        if name not in domains:
            raise _err(UnboundVariable, f"variable {name} does not occur in a typed position", decl, stmt.line)
    constraints = [c for c in stmt.body if isinstance(c, Constraint)]
    for values in itertools.product(*(domains[n] for n in order)):
        binding = dict(zip(order, values))
        ok = True
        for c in constraints:
            left, right = _subst(c.left, binding), _subst(c.right, binding)
            if (left == right) != (c.op == "=="):
                ok = False
                break
        if ok:
            yield binding


def _ground_goal(decl: DomainSpec, node) -> Formula:
    tag = node[0]
    if tag == "const":
        return TRUE if node[1] else FALSE
    if tag == "lit":
        lit: SLit = node[1]
        if _vars_of([lit]):
            raise _err(UnboundVariable, f"variable in goal literal {lit.atom}", decl, decl.goal_line)
        _type_vars(decl, [(lit.atom, "fluent")], decl.goal_line)
        return Lit(_ground_lit(lit, {}))
    if tag == "not":
        return FNot(_ground_goal(decl, node[1]))
    parts = tuple(_ground_goal(decl, p) for p in node[1])
    return FAnd(parts) if tag == "and" else FOr(parts)


def ground(decl: DomainSpec) -> ActionTheory:
    """Instantiate every schema over the declared sorts.

    Raises :class:`EmptySort` for undeclared or empty sorts and
    :class:`UnboundVariable` for variables without a typed position.
    """
    fluents: list[str] = []
    for name, sorts in decl.fluents.items():
        consts = [_sort_constants(decl, s, 0) for s in sorts]
        fluents.extend(format_atom(name, combo) for combo in itertools.product(*consts))
    actions: list[str] = []
    for name, sorts in decl.actions.items():
        consts = [_sort_constants(decl, s, 0) for s in sorts]
        actions.extend(format_atom(name, combo) for combo in itertools.product(*consts))

    dynamic: dict = {}
    static: dict = {}
    execs: dict = {}
    initial: list[FluentLiteral] = []
    for stmt in decl.statements:
        for b in _bindings(decl, stmt):
            body = tuple(_ground_lit(item, b) for item in stmt.body if isinstance(item, SLit))
            if stmt.kind == "dynamic":
                law = DynamicLaw(_ground_atom(stmt.head, b), _ground_lit(stmt.effect, b), body)
                dynamic.setdefault(law, None)
            elif stmt.kind == "static":
                law = StaticLaw(_ground_lit(stmt.head, b), body)
                static.setdefault(law, None)
            elif stmt.kind == "exec":
                cond = ExecCondition(_ground_atom(stmt.head, b), body)
                execs.setdefault(cond, None)
            else:
                initial.append(_ground_lit(stmt.head, b))
    goal = TRUE if decl.goal is None else _ground_goal(decl, decl.goal)
    return ActionTheory(
        fluents=tuple(fluents),
        actions=tuple(actions),
        dynamic=tuple(dynamic),
        static=tuple(static),
        exec=tuple(execs),
        initial=frozenset(initial),
        goal=goal,
    )


def load_domain(path, text: str | None = None) -> ActionTheory:
    path = Path(path)
    if text is None:
        text = path.read_text(encoding="utf-8")
    return ground(parse_domain(text, str(path)))
