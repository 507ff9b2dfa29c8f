"""Concrete syntax for preferences.

Operators, loosest first::

    <|            lexicographic chain            (preference level)
    |             one better, other not worse    (preference level)
    &             both better                    (preference level)
    ||            disjunction                    (desire level)
    &&            conjunction                    (desire level)
    <  <w  <e     strong, weak and enabled desire sugar
    !!  !  not    preference reversal, desire negation (prefix)

A preference file is a sequence of statements ending in ``.`` (or ``;``)::

    desire cost = always(walk(home,school) <e (call_taxi(home) || take_taxi(home,school))).
    desire time = always((call_taxi(home) || take_taxi(home,school)) <e walk(home,school)).
    pref p = cost <| time.
    optimize p.

Names are resolved in a second pass so that a bare atom can denote a fluent
in one position and an action in the operand of ``<e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import FALSE, TRUE, ActionTheory, FAnd, FluentLiteral, FNot, FOr, Formula, Lit
from .domain import format_atom
from .errors import ResolutionError, UnresolvedAction, UnresolvedFluent
from .lexer import Token, TokenStream, tokenize
from .pp import (
    Always,
    Conj,
    Desire,
    Disj,
    Eventually,
    Goal,
    Neg,
    Next,
    Occ,
    Preference,
    StateFormula,
    Until,
    as_preference,
    conjoin,
    d_and,
    d_not,
    d_or,
    enabled_chain,
    make_chain,
    maxim,
    parametric_enabled,
    strong_desire,
    temporal_order_desire,
    weak_desire,
)

__all__ = [
    "PreferenceSpec",
    "parse_preference",
    "parse_desire",
    "parse_preference_file",
    "load_preferences",
]

_CALLS = {"occ", "goal", "next", "always", "eventually", "until", "before", "maxim"}


@dataclass
class PreferenceSpec:
    desires: dict = field(default_factory=dict)
    prefs: dict = field(default_factory=dict)
    root: Preference | None = None
    root_name: str | None = None


# -- raw syntax tree -----------------------------------------------------------
# Nodes are tuples ``(kind, token, *payload)``; the token locates diagnostics.


def _expr(ts: TokenStream):
    tok = ts.peek()
    parts = [_pdisj(ts)]
    while ts.accept("<|"):
        parts.append(_pdisj(ts))
    return parts[0] if len(parts) == 1 else ("pchain", tok, parts)


def _binary_level(kind: str, op: str, sub):
    def parse(ts: TokenStream):
        left = sub(ts)
        while True:
            tok = ts.peek()
            if not ts.accept(op):
                return left
            left = (kind, tok, left, sub(ts))

    return parse


def _sugar(ts: TokenStream):
    tok = ts.peek()
    operands = [_unary(ts)]
    ops = []
    while ts.peek().value in ("<", "<w", "<e") and ts.peek().kind == "op":
        ops.append(ts.next().value)
        operands.append(_unary(ts))
    if not ops:
        return operands[0]
    over = None
    if ts.at("over"):
        over_tok = ts.next()
        ts.expect("{")
        consts = [_constant(ts)]
        while ts.accept(","):
            consts.append(_constant(ts))
        ts.expect("}")
        over = (over_tok, consts)
    return ("sugar", tok, ops, operands, over)


_dand = _binary_level("dand", "&&", _sugar)
_dor = _binary_level("dor", "||", _dand)
_pconj = _binary_level("pconj", "&", _dor)
_pdisj = _binary_level("pdisj", "|", _pconj)


def _unary(ts: TokenStream):
    tok = ts.peek()
    if ts.accept("!!"):
        return ("pneg", tok, _unary(ts))
    if ts.accept("!") or ts.accept("not"):
        return ("dnot", tok, _unary(ts))
    return _primary(ts)


def _constant(ts: TokenStream) -> str:
    tok = ts.peek()
    if tok.kind in ("ident", "number"):
        return ts.next().value
    ts.error(f"expected a constant, found {tok}")


def _atom_text(ts: TokenStream) -> tuple[Token, str]:
    tok = ts.expect_kind("ident", "a name")
    args = []
    if ts.accept("("):
        args.append(_constant(ts))
        while ts.accept(","):
            args.append(_constant(ts))
        ts.expect(")")
    return tok, format_atom(tok.value, args)


def _primary(ts: TokenStream):
    tok = ts.peek()
    if ts.accept("("):
        inner = _expr(ts)
        ts.expect(")")
        return inner
    if tok.kind == "ident" and tok.value in ("true", "false"):
        ts.next()
        return ("const", tok, tok.value == "true")
    if ts.accept("-"):
        _, text = _atom_text(ts)
        return ("neglit", tok, text)
    if tok.kind == "ident" and tok.value in _CALLS and ts.at("(", 1):
        ts.next()
        ts.expect("(")
        if tok.value == "occ":
            _, text = _atom_text(ts)
            ts.expect(")")
            return ("occ", tok, text)
        args = [_expr(ts)]
        while ts.accept(","):
            args.append(_expr(ts))
        ts.expect(")")
        arity = {"until": 2, "before": 2, "maxim": None}.get(tok.value, 1)
        if arity is not None and len(args) != arity:
            ts.error(f"{tok.value} takes {arity} argument(s), got {len(args)}", tok)
        return ("call", tok, tok.value, args)
    if tok.kind == "ident":
        _, text = _atom_text(ts)
        return ("atom", tok, text)
    ts.error(f"expected a desire or preference, found {tok}")


# -- resolution ------------------------------------------------------------------


class _Resolver:
    def __init__(self, theory: ActionTheory | None, source: str, decl: PreferenceSpec | None = None):
        self.theory = theory
        self.source = source
        self.decl = decl or PreferenceSpec()

    def error(self, message: str, tok: Token, cls=ResolutionError):
        raise cls(message, tok.line, tok.column, self.source)

    # fluent formulas -------------------------------------------------------

    def fluent(self, text: str, tok: Token) -> str:
        th = self.theory
        if th is not None and text not in th.fluent_set:
            if text in th.action_set:
                self.error(f"{text} is an action; write occ({text})", tok, UnresolvedFluent)
            self.error(f"unknown fluent {text}", tok, UnresolvedFluent)
        return text

    def action(self, text: str, tok: Token) -> str:
        th = self.theory
        if th is not None and text not in th.action_set:
            self.error(f"unknown action {text}", tok, UnresolvedAction)
        return text

    def formula(self, node) -> Formula:
        kind, tok = node[0], node[1]
        if kind == "atom":
            if node[2] in self.decl.desires or node[2] in self.decl.prefs:
                self.error(f"{node[2]} names a desire; goal(...) needs a fluent formula", tok)
            return Lit(FluentLiteral(self.fluent(node[2], tok)))
        if kind == "neglit":
            return Lit(FluentLiteral(self.fluent(node[2], tok), False))
        if kind == "const":
            return TRUE if node[2] else FALSE
        if kind == "dnot":
            return FNot(self.formula(node[2]))
        if kind == "dand":
            return FAnd((self.formula(node[2]), self.formula(node[3])))
        if kind == "dor":
            return FOr((self.formula(node[2]), self.formula(node[3])))
        self.error("only fluent literals, true/false, &&, || and ! may appear in a fluent formula", tok)

    # desires -----------------------------------------------------------------

    def desire(self, node) -> Desire:
        out = self.any(node)
        if not isinstance(out, Desire):
            self.error("a preference cannot be used inside a desire", node[1])
        return out

    def any(self, node) -> Desire | Preference:
        kind, tok = node[0], node[1]
        if kind == "atom":
            name = node[2]
            if name in self.decl.desires:
                return self.decl.desires[name]
            if name in self.decl.prefs:
                return self.decl.prefs[name]
            return StateFormula(Lit(FluentLiteral(self.fluent(name, tok))))
        if kind in ("neglit", "const"):
            return StateFormula(self.formula(node))
        if kind == "occ":
            return Occ(self.action(node[2], tok))
        if kind == "dnot":
            return d_not(self.desire(node[2]))
        if kind == "dand":
            return d_and(self.desire(node[2]), self.desire(node[3]))
        if kind == "dor":
            return d_or(self.desire(node[2]), self.desire(node[3]))
        if kind == "sugar":
            return self.sugar(node)
        if kind == "call":
            return self.call(node)
        if kind == "pneg":
            return Neg(self.pref(node[2]))
        if kind == "pconj":
            return Conj(self.pref(node[2]), self.pref(node[3]))
        if kind == "pdisj":
            return Disj(self.pref(node[2]), self.pref(node[3]))
        if kind == "pchain":
            return make_chain([self.any(p) for p in node[2]])
        raise AssertionError(kind)

    def pref(self, node) -> Preference:
        return as_preference(self.any(node))

    def call(self, node) -> Desire | Preference:
        name, args = node[2], node[3]
        if name == "goal":
            return Goal(self.formula(args[0]))
        if name == "next":
            return Next(self.desire(args[0]))
        if name == "always":
            return Always(self.desire(args[0]))
        if name == "eventually":
            return Eventually(self.desire(args[0]))
        if name == "until":
            return Until(self.desire(args[0]), self.desire(args[1]))
        if name == "before":
            return temporal_order_desire(self.formula(args[0]), self.formula(args[1]))
        if name == "maxim":
            return maxim([self.desire(a) for a in args])
        raise AssertionError(name)

    def action_group(self, node) -> list[tuple[Token, str]]:
        kind = node[0]
        if kind in ("atom", "occ"):
            return [(node[1], node[2])]
        if kind == "dor":
            return self.action_group(node[2]) + self.action_group(node[3])
        self.error("operands of <e must be actions or (a1 || a2 ...) groups", node[1])

    def sugar(self, node) -> Desire:
        tok, ops, operands, over = node[1], node[2], node[3], node[4]
        if "<e" in ops:
            if any(op != "<e" for op in ops):
                self.error("<e cannot be mixed with < or <w in one chain", tok)
            if self.theory is None:
                self.error("an enabled desire needs an action theory", tok)
            groups = [self.action_group(op) for op in operands]
            if over is not None:
                return self.parametric(groups, over)
            resolved = [[self.action(text, t) for t, text in g] for g in groups]
            return enabled_chain(resolved, self.theory)
        if over is not None:
            self.error("'over' only applies to <e", over[0])
        items = [self.desire(op) for op in operands]
        pairs = []
        for op, a, b in zip(ops, items, items[1:]):
            pairs.append(strong_desire(a, b) if op == "<" else weak_desire(a, b))
        return conjoin(pairs)

    def parametric(self, groups, over) -> Desire:
        consts = over[1]
        pairs = []
        for ga, gb in zip(groups, groups[1:]):
            if len(ga) != 1 or len(gb) != 1:
                self.error("parametric <e takes single action names", over[0])
            (ta, a), (_, b) = ga[0], gb[0]
            try:
                pairs.append(parametric_enabled(a, b, consts, self.theory))
            except Exception as exc:  # unknown family names
                self.error(f"cannot expand {a} <e {b}: {exc}", ta, UnresolvedAction)
        return conjoin(pairs)


# -- entry points ------------------------------------------------------------------


def parse_preference(text: str, theory: ActionTheory | None = None, source: str = "<input>") -> Preference:
    """Parse a single preference expression."""
    ts = TokenStream(tokenize(text, source), source)
    node = _expr(ts)
    if not ts.at_eof():
        ts.error(f"unexpected {ts.peek()}")
    return _Resolver(theory, source).pref(node)


def parse_desire(text: str, theory: ActionTheory | None = None, source: str = "<input>") -> Desire:
    ts = TokenStream(tokenize(text, source), source)
    node = _expr(ts)
    if not ts.at_eof():
        ts.error(f"unexpected {ts.peek()}")
    return _Resolver(theory, source).desire(node)


def _terminator(ts: TokenStream) -> None:
    if not (ts.accept(".") or ts.accept(";")):
        ts.error(f"expected '.' at end of statement, found {ts.peek()}")


def parse_preference_file(text: str, theory: ActionTheory | None = None, source: str = "<input>") -> PreferenceSpec:
    """Parse ``desire``/``pref`` declarations and the ``optimize`` statement."""
    ts = TokenStream(tokenize(text, source), source)
    decl = PreferenceSpec()
    res = _Resolver(theory, source, decl)
    optimize_tok = None
    while not ts.at_eof():
        tok = ts.peek()
        if tok.kind == "ident" and tok.value in ("desire", "pref"):
            ts.next()
            name_tok = ts.expect_kind("ident", "a name")
            name = name_tok.value
            ts.expect("=")
            node = _expr(ts)
            _terminator(ts)
            if name in decl.desires or name in decl.prefs:
                res.error(f"{name} declared twice", name_tok)
            if theory is not None and (name in theory.fluent_set or name in theory.action_set):
                res.error(f"{name} is already a fluent or action name", name_tok)
            if tok.value == "desire":
                decl.desires[name] = res.desire(node)
            else:
                decl.prefs[name] = res.any(node)
        elif tok.kind == "ident" and tok.value == "optimize":
            ts.next()
            if optimize_tok is not None:
                res.error("more than one optimize statement", tok)
            optimize_tok = tok
            node = _expr(ts)
            _terminator(ts)
            if node[0] == "atom":
                decl.root_name = node[2]
            decl.root = res.pref(node)
        else:
            ts.error(f"expected 'desire', 'pref' or 'optimize', found {tok}")
    if decl.root is None:
        raise ResolutionError("no optimize statement", 0, 0, source)
    return decl


def load_preferences(path, theory: ActionTheory | None = None) -> PreferenceSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_preference_file(fh.read(), theory, str(path))
