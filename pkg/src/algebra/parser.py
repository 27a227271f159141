"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') exponent)?
    atom   := integer | name | '(' expr ')'

Division is only allowed by a nonzero constant. Everything is expanded as it
is parsed, so the result is already the canonical sparse polynomial.
"""
from __future__ import annotations

import logging
import re
from typing import List, NamedTuple, Sequence

from src.algebra.poly import MonomialOrder, Polynomial
from src.errors import NegativeExponentError, PolynomialSyntaxError, UnknownVariableError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r'\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))')


class Token(NamedTuple):
    kind: str  # 'int', 'name', 'op', 'eof'
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f'unexpected character {text[pos]!r}', pos, text)
        start = match.start(match.lastindex)
        number, name, op = match.groups()
        if number is not None:
            tokens.append(Token('int', number, start))
        elif name is not None:
            tokens.append(Token('name', name, start))
        else:
            tokens.append(Token('op', op, start))
        pos = match.end()
    tokens.append(Token('eof', '', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], order: MonomialOrder):
        self.text = text
        self.variables = tuple(variables)
        self.order = order
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def _accept(self, *ops: str) -> bool:
        tok = self.current
        return tok.kind == 'op' and tok.text in ops

    def _fail(self, message: str, tok: Token = None):
        tok = tok or self.current
        raise PolynomialSyntaxError(message, tok.position, self.text)

    def parse(self) -> Polynomial:
        if self.current.kind == 'eof':
            self._fail('empty expression')
        result = self.expr()
        if self.current.kind != 'eof':
            self._fail(f'unexpected {self.current.text!r}')
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while self._accept('+', '-'):
            op = self._advance().text
            rhs = self.term()
            result = result + rhs if op == '+' else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.unary()
        while self._accept('*', '/'):
            op = self._advance()
            rhs_start = self.current
            rhs = self.unary()
            if op.text == '*':
                result = result * rhs
                continue
            if not rhs.is_constant():
                self._fail('division by a non-constant expression', rhs_start)
            divisor = rhs.constant_term()
            if not divisor:
                self._fail('division by zero', rhs_start)
            result = result.scale(1 / divisor)
        return result

    def unary(self) -> Polynomial:
        if self._accept('-'):
            self._advance()
            return -self.unary()
        if self._accept('+'):
            self._advance()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self._accept('^', '**'):
            self._advance()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.current
        if tok.kind == 'op' and tok.text == '-':
            raise NegativeExponentError(tok.position, self.text)
        if tok.kind == 'op' and tok.text == '+':
            self._advance()
            tok = self.current
        if tok.kind != 'int':
            self._fail('expected a non-negative integer exponent')
        self._advance()
        return int(tok.text)

    def atom(self) -> Polynomial:
        tok = self.current
        if tok.kind == 'int':
            self._advance()
            return Polynomial.constant(self.variables, int(tok.text), self.order)
        if tok.kind == 'name':
            self._advance()
            if tok.text not in self.variables:
                raise UnknownVariableError(tok.text, tok.position, self.text)
            return Polynomial.variable(self.variables, tok.text, self.order)
        if self._accept('('):
            self._advance()
            inner = self.expr()
            if not self._accept(')'):
                self._fail("expected ')'")
            self._advance()
            return inner
        if tok.kind == 'eof':
            self._fail('unexpected end of input')
        self._fail(f'unexpected {tok.text!r}')


def parse_polynomial(text: str, variables: Sequence[str] = ('x', 'y'),
                     order: MonomialOrder = MonomialOrder.DEGREVLEX) -> Polynomial:
    """Parse `text` into a canonical polynomial over `variables`."""
    result = _Parser(text, variables, MonomialOrder.parse(order)).parse()
    logger.debug('parsed %r -> %s', text, result)
    return result
