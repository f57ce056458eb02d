"""Expression parser for curve input and canonical-text round trips.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' unary)?
    atom   := INTEGER | IDENT | '(' expr ')'

``^`` is right associative and its exponent must evaluate to an integer
constant. ``-z^2`` therefore means ``-(z^2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .exact import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Num:
    value: int
    offset: int


@dataclass(frozen=True)
class Sym:
    name: str
    offset: int


@dataclass(frozen=True)
class Neg:
    operand: object
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    offset: int


def tokenize(src):
    data = src.encode("utf-8") if isinstance(src, str) else src
    text = data.decode("utf-8")
    if len(text) != len(data):
        # offsets are reported in bytes; keep the mapping trivial by rejecting non-ASCII input
        for i, ch in enumerate(text):
            if ord(ch) > 127:
                raise ParseError(f"unexpected character {ch!r}", len(text[:i].encode("utf-8")))
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", pos + skip)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, off = self.take()
        if kind != "op" or val != value:
            raise ParseError(f"expected {value!r}", off)

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, off = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term(), off)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, off = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.unary(), off)
            else:
                return node

    def unary(self):
        kind, val, off = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary(), off)
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, off = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return BinOp("^", base, self.unary(), off)
        return base

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(val, off)
        if kind == "ident":
            return Sym(val, off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected token {val!r}", off)


def parse_expression(src):
    """Parse ``src`` into an AST (Num, Sym, Neg, BinOp nodes)."""
    return _Parser(src).parse()


def lower(node, allowed=None):
    """Evaluate an AST to a RationalFunction."""
    if isinstance(node, Num):
        return RationalFunction.constant(node.value)
    if isinstance(node, Sym):
        if allowed is not None and node.name not in allowed:
            raise ParseError(f"unknown symbol {node.name!r}", node.offset)
        return RationalFunction.variable(node.name)
    if isinstance(node, Neg):
        return -lower(node.operand, allowed)
    left = lower(node.left, allowed)
    right = lower(node.right, allowed)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if right.is_zero():
            raise ParseError("division by zero", node.offset)
        return left / right
    # exponent
    if not right.is_constant():
        raise ParseError("exponent must be an integer constant", node.offset)
    e = right.constant_value()
    if e.denominator != 1:
        raise ParseError(f"non-integer exponent {e}", node.offset)
    if e < 0 and left.is_zero():
        raise ParseError("division by zero", node.offset)
    return left ** int(e)


def parse_rational_function(src, allowed=None):
    return lower(parse_expression(src), allowed)


def parse_curve_function(src):
    """Parse an expression in the single variable z."""
    return parse_rational_function(src, allowed={"z"})


def parse_fraction(text):
    return Fraction(text)
