"""Recursive-descent parser for the small expression language used in configs.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom (('^' | '**') unary)?
    atom    := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Numbers are integers or decimals and are read exactly as fractions.
The parser only builds a tree; interpretation is left to the consumer
(exact rational expressions in :mod:`leafclass.symbolics`, truncated
Taylor series in :mod:`leafclass.taylor`).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        kind, tok = self.peek()
        if kind is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        if value is not None and tok != value:
            raise ParseError(f"expected {value!r}, got {tok!r} in {self.text!r}")
        self.i += 1
        return kind, tok

    def parse(self):
        node = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input {self.tokens[self.i][1]!r} in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op = self.take()
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()[1]
        if tok == "-":
            self.take()
            return Neg(self.unary())
        if tok == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return Num(Fraction(tok))
        if kind == "name":
            if self.peek()[1] == "(":
                self.take("(")
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take(",")
                    args.append(self.expr())
                self.take(")")
                return Call(tok, tuple(args))
            return Name(tok)
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse(text: str):
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()


def integer_exponent(node) -> int:
    """Return the integer value of a constant exponent subtree."""
    if isinstance(node, Num) and node.value.denominator == 1:
        return int(node.value)
    if isinstance(node, Neg):
        return -integer_exponent(node.operand)
    raise ParseError("exponents must be integer literals")
