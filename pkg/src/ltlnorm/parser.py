"""Recursive-descent parser for the LTL text syntax.

Unary operators (X F G GF FG !) bind tightest, then the right-associative
binary temporal operators U W R M, then &, then |.
"""

import re

from . import formula as fm

UNARY = {"X", "F", "G", "GF", "FG", "!"}
BINARY = {"U": fm.Until, "W": fm.WeakUntil, "R": fm.Release, "M": fm.StrongRelease}
KEYWORDS = UNARY | set(BINARY) | {"tt", "ff"}

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(\(|\)|!|&|\|))")


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unknown operator or character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append((None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok[0]

    def expect(self, tok):
        if self.peek() != tok:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {tok!r}, found {found!r}", self.pos())
        self.take()

    def disjunction(self):
        left = self.conjunction()
        if self.peek() == "|":
            self.take()
            return fm.Or(left, self.disjunction())
        return left

    def conjunction(self):
        left = self.binary()
        if self.peek() == "&":
            self.take()
            return fm.And(left, self.conjunction())
        return left

    def binary(self):
        left = self.unary()
        op = self.peek()
        if op in BINARY:
            self.take()
            return BINARY[op](left, self.binary())
        return left

    def unary(self):
        tok = self.peek()
        if tok in UNARY:
            self.take()
            arg = self.unary()
            if tok == "!":
                return fm.negate(arg)
            if tok == "X":
                return fm.Next(arg)
            if tok == "F":
                return fm.F(arg)
            if tok == "G":
                return fm.G(arg)
            if tok == "GF":
                return fm.GF(arg)
            return fm.FG(arg)
        return self.atom()

    def atom(self):
        tok, pos = self.peek(), self.pos()
        if tok == "(":
            self.take()
            inner = self.disjunction()
            self.expect(")")
            return inner
        if tok == "tt":
            self.take()
            return fm.tt
        if tok == "ff":
            self.take()
            return fm.ff
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        if tok in KEYWORDS or not tok[0].isalpha():
            raise ParseError(f"unexpected token {tok!r}", pos)
        self.take()
        return fm.Lit(tok)


def parse(text):
    """Parse `text` into an NNF formula; negations are pushed to literals."""
    p = _Parser(text)
    f = p.disjunction()
    if p.peek() is not None:
        raise ParseError(f"unexpected token {p.peek()!r}", p.pos())
    return f
