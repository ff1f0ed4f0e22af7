"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace-insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*          # '/' only by constants
    factor := base (('^'|'**') int)?
    base   := number | 'i' | var | 'conj(' expr ')' | 'Re(' expr ')'
            | 'Im(' expr ')' | '|' expr '|' '^' even | '(' expr ')'
            | '-' factor
    var    := 'z' int | 'w'    ('z' alone is accepted when n == 1)

Sugar forms are expanded on the spot: |e|^2k -> (e*conj(e))^k,
Re(e) -> (e + conj(e))/2, Im(e) -> (e - conj(e))/(2i).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .gaussian import GaussianRational, I
from .polyring import Poly

__all__ = ["ParseError", "parse"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()|,]))"
)


class ParseError(ValueError):
    """Syntax or semantic error, carrying the character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return out

    def expr(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val == "+":
            self.take()
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                dpos = self.peek()[2]
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division only by a nonzero constant", dpos)
                acc = acc / d
            else:
                return acc

    def exponent(self) -> int:
        kind, val, pos = self.take()
        if kind != "num" or "." in val:
            raise ParseError("exponent must be a nonnegative integer", pos)
        return int(val)

    def factor(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            base = base ** self.exponent()
        return base

    def base(self) -> Poly:
        n = self.n
        kind, val, pos = self.take()
        if kind == "num":
            return Poly.const(n, GaussianRational(Fraction(val)))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "op" and val == "|":
            inner = self.expr()
            self.expect("|")
            k2, v2, p2 = self.take()
            if v2 not in ("^", "**"):
                raise ParseError("|e| must be raised to an even power", p2)
            p3 = self.peek()[2]
            k = self.exponent()
            if k == 0 or k % 2:
                raise ParseError("|e| must be raised to an even power", p3)
            return (inner * inner.conj()) ** (k // 2)
        if kind == "name":
            if val in ("conj", "Re", "Im"):
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                if val == "conj":
                    return inner.conj()
                if val == "Re":
                    return (inner + inner.conj()) / 2
                return (inner - inner.conj()) / (2 * I)
            if val == "i":
                return Poly.const(n, I)
            if val == "w":
                return Poly.w(n)
            if val == "z" and n == 1:
                return Poly.z(n, 1)
            m = re.fullmatch(r"z(\d+)", val)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= n:
                    raise ParseError(f"variable {val} out of range for n={n}", pos)
                return Poly.z(n, k)
            raise ParseError(f"unknown variable or function {val!r}", pos)
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, n: int) -> Poly:
    """Parse ``text`` into a canonical :class:`Poly` with ``n`` z-variables."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _Parser(text, n).parse()
