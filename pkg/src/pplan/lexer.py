"""Tokenizer shared by the domain, preference and plan file parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<comment>%[^\n]*)
  | (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<dotdot>\.\.)
  | (?P<number>\d+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<op><\||<e(?![A-Za-z0-9_])|<w(?![A-Za-z0-9_])|&&|\|\||!!|!=|==|[()<{},.=&|!\-;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, var, number, op, dotdot, eof
    value: str
    line: int
    column: int

    def __str__(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.value)


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], source: str = "<input>"):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self, offset: int = 0) -> Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("op", "ident", "dotdot") and tok.value == value

    def accept(self, value: str) -> Token | None:
        if self.at(value):
            return self.next()
        return None

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if not self.at(value):
            self.error(f"expected {value!r}, found {tok}", tok)
        return self.next()

    def expect_kind(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {what or kind}, found {tok}", tok)
        return self.next()

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column, self.source)
