"""Tokenizer and Pratt parser shared by every expression mini-language.

The parser is agnostic about what it builds: callers pass an *algebra* object
providing ``number``, ``name``, ``call``, ``add``, ``sub``, ``mul``, ``div``,
``neg`` and ``pow``.  Juxtaposition (``2n``, ``2(n+1)``) is rejected; every
product needs an explicit ``*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

MAX_EXPONENT = 64

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(Token("num", num, start))
        elif name is not None:
            tokens.append(Token("name", name, start))
        else:
            if op not in "+-*/^(),":
                raise ParseError(f"unexpected character {op!r}", start, text)
            tokens.append(Token("op", op, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text.rstrip())))
    return tokens


_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_BP = 25


class _Parser:
    def __init__(self, text: str, algebra):
        self.text = text
        self.alg = algebra
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token):
        raise ParseError(message, tok.pos, self.text)

    def expect(self, text: str):
        tok = self.advance()
        if tok.text != text or tok.kind != "op":
            self.error(f"expected {text!r}", tok)

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression", self.peek())
        value = self.expression(0)
        tok = self.peek()
        if tok.kind != "end":
            self.error("expected operator or end of input", tok)
        return value

    def expression(self, rbp: int):
        left = self.prefix()
        while True:
            tok = self.peek()
            if tok.kind in ("num", "name") or (tok.kind == "op" and tok.text == "("):
                self.error("implicit multiplication is not allowed; use '*'", tok)
            if tok.kind != "op" or tok.text not in _BINARY:
                return left
            lbp = _BINARY[tok.text]
            if lbp <= rbp:
                return left
            self.advance()
            if tok.text == "^":
                left = self.power(left, tok)
                continue
            right = self.expression(lbp)
            left = self.binary(tok, left, right)

    def power(self, base, tok: Token):
        exp_tok = self.advance()
        if exp_tok.kind != "num" or "." in exp_tok.text:
            self.error("exponent must be a nonnegative integer literal", exp_tok)
        k = int(exp_tok.text)
        if k > MAX_EXPONENT:
            self.error(f"exponent {k} exceeds the cap of {MAX_EXPONENT}", exp_tok)
        return self.guard(lambda: self.alg.pow(base, k), tok)

    def binary(self, tok: Token, left, right):
        op = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[tok.text]
        return self.guard(lambda: getattr(self.alg, op)(left, right), tok)

    def guard(self, fn, tok: Token):
        try:
            return fn()
        except ParseError:
            raise
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(str(exc), tok.pos, self.text) from exc

    def prefix(self):
        tok = self.advance()
        if tok.kind == "num":
            return self.guard(lambda: self.alg.number(tok.text), tok)
        if tok.kind == "name":
            if self.peek().kind == "op" and self.peek().text == "(":
                self.advance()
                args = []
                if not (self.peek().kind == "op" and self.peek().text == ")"):
                    args.append(self.expression(0))
                    while self.peek().kind == "op" and self.peek().text == ",":
                        self.advance()
                        args.append(self.expression(0))
                self.expect(")")
                return self.guard(lambda: self.alg.call(tok.text, args), tok)
            return self.guard(lambda: self.alg.name(tok.text), tok)
        if tok.kind == "op" and tok.text == "(":
            value = self.expression(0)
            self.expect(")")
            return value
        if tok.kind == "op" and tok.text in "+-":
            operand = self.expression(_PREFIX_BP)
            if tok.text == "+":
                return operand
            return self.guard(lambda: self.alg.neg(operand), tok)
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {tok.text!r}", tok)


def parse_with(text: str, algebra):
    """Parse ``text`` and fold it through ``algebra``."""
    return _Parser(text, algebra).parse()
