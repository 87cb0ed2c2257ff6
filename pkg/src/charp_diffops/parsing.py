"""Small recursive-descent parser shared by the polynomial and operator grammars.

Grammar (whitespace-insensitive; ``^`` binds tighter than ``*``)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT | '^' '[' INT ']')?
    atom   := INT | NAME | '(' expr ')'

``NAME ^ [k]`` is a divided power and is only accepted when the caller
supplies a handler for it.
"""

from __future__ import annotations

import re
from typing import Callable, Optional

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


class ParseError(ValueError):
    """Syntax error carrying the 0-based character position."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__("%s at position %d" % (message, pos))


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or (m.group(0).strip() == ""):
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()[]":
                raise ParseError("unexpected character %r" % ch, start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class ExpressionParser:
    def __init__(
        self,
        number: Callable[[int], object],
        name: Callable[[str, int], object],
        divided: Optional[Callable[[str, int, int], object]] = None,
    ):
        self.number = number
        self.name = name
        self.divided = divided

    def parse(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        if self.tokens[0][0] == "end":
            raise ParseError("empty expression", 0, text)
        value = self._expr()
        kind, _, pos = self.tokens[self.i]
        if kind != "end":
            raise ParseError("unexpected token %r" % self.tokens[self.i][1], pos, text)
        return value

    def _peek(self):
        return self.tokens[self.i]

    def _take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError("expected %r, found %s" % (kind, found), tok[2], self.text)
        self.i += 1
        return tok

    def _expr(self):
        value = self._term()
        while self._peek()[0] in "+-":
            op = self._take(self._peek()[0])[0]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._unary()
        while self._peek()[0] == "*":
            self._take("*")
            value = value * self._unary()
        return value

    def _unary(self):
        kind = self._peek()[0]
        if kind == "-":
            self._take("-")
            return -self._unary()
        if kind == "+":
            self._take("+")
            return self._unary()
        return self._power()

    def _power(self):
        kind, val, pos = self._peek()
        if kind == "name" and self.tokens[self.i + 1][0] == "^" and self.tokens[self.i + 2][0] == "[":
            self.i += 3
            k = self._take("int")[1]
            self._take("]")
            if self.divided is None:
                raise ParseError("divided power not allowed here", pos, self.text)
            return self.divided(val, k, pos)
        base = self._atom()
        if self._peek()[0] == "^":
            self._take("^")
            k = self._take("int")[1]
            return base ** k
        return base

    def _atom(self):
        kind, val, pos = self._peek()
        if kind == "int":
            self.i += 1
            return self.number(val)
        if kind == "name":
            self.i += 1
            return self.name(val, pos)
        if kind == "(":
            self.i += 1
            value = self._expr()
            self._take(")")
            return value
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError("unexpected %s" % found, pos, self.text)
