"""
Precedence-climbing parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ['-'] atom ['^' ['-'] integer]
    atom   := identifier | 'conj' '(' expr ')' | 'phi' '[' int ',' int ',' int ']'
            | integer | 'i' | '(' expr ')'

Rational literals are ordinary quotients of integers. Chained powers
must be parenthesized.
"""
import logging
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .exceptions import (DivisionByZeroExpr, IllegalVariable, NotReal, SourceSyntaxError,
                         UnknownIdentifier, ZeroDenominator)
from .expr import I, conjugate, const, div, mul, neg, power, sub, add, var
from .variables import BASE_NAMES, GROUP_NAMES, jet_var, var_from_name

logger = logging.getLogger(__name__)

OPERATORS = [
    [('+', 'left'), ('-', 'left')],
    [('*', 'left'), ('/', 'left')],
    [('^', 'none')],
]
OPERATOR_PREC = {name: idx for idx, group in enumerate(OPERATORS) for name, _ in group}
PUNCTUATION = '()[],'
IDENTIFIERS = set(BASE_NAMES) | set(GROUP_NAMES) | {'i', 'conj', 'phi'}


@dataclass
class Token:
    kind: str
    text: str
    start: int
    end: int

    @property
    def span(self):
        return (self.start, self.end)


@dataclass
class SourceNode:
    """
    Syntax tree node; span is the (start, end) slice of the source
    """
    kind: str
    span: Tuple[int, int]
    value: Optional[object] = None
    children: list = field(default_factory=list)


def tokenize(source: str) -> list:
    tokens = []
    idx = 0
    n = len(source)
    while idx < n:
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        start = idx
        if c.isdigit():
            while idx < n and source[idx].isdigit():
                idx += 1
            tokens.append(Token('int', source[start:idx], start, idx))
            continue
        if c.isalpha() or c == '_':
            while idx < n and (source[idx].isalnum() or source[idx] == '_'):
                idx += 1
            tokens.append(Token('ident', source[start:idx], start, idx))
            continue
        if c in OPERATOR_PREC or c in PUNCTUATION:
            tokens.append(Token('op', c, start, idx + 1))
            idx += 1
            continue
        raise SourceSyntaxError(f"unexpected character {c!r}", (start, start + 1))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = deque(tokenize(source))

    def error(self, message, token=None):
        if token is None:
            span = (len(self.source), len(self.source))
        else:
            span = token.span
        return SourceSyntaxError(message, span)

    def peek(self):
        return self.tokens[0] if self.tokens else None

    def take(self):
        if not self.tokens:
            raise self.error("unexpected end of input")
        return self.tokens.popleft()

    def expect(self, text):
        token = self.take()
        if token.text != text:
            raise self.error(f"expected {text!r}, found {token.text!r}", token)
        return token

    def parse(self):
        if not self.tokens:
            raise self.error("empty expression")
        node = self.parse_binary(0)
        if self.tokens:
            token = self.peek()
            raise self.error(f"unexpected {token.text!r}", token)
        return node

    def parse_binary(self, min_prec):
        lhs = self.parse_factor()
        while True:
            token = self.peek()
            if token is None or token.kind != 'op' or token.text not in ('+', '-', '*', '/'):
                return lhs
            prec = OPERATOR_PREC[token.text]
            if prec < min_prec:
                return lhs
            self.take()
            rhs = self.parse_binary(prec + 1)
            lhs = SourceNode('binop', (lhs.span[0], rhs.span[1]), token.text, [lhs, rhs])

    def parse_factor(self):
        token = self.peek()
        if token is not None and token.text == '-':
            self.take()
            operand = self.parse_factor()
            return SourceNode('neg', (token.start, operand.span[1]), None, [operand])
        base = self.parse_atom()
        token = self.peek()
        if token is None or token.text != '^':
            return base
        self.take()
        sign = 1
        if self.peek() is not None and self.peek().text == '-':
            self.take()
            sign = -1
        exponent = self.take()
        if exponent.kind != 'int':
            raise self.error("exponent must be an integer literal", exponent)
        node = SourceNode('pow', (base.span[0], exponent.end), sign * int(exponent.text), [base])
        after = self.peek()
        if after is not None and after.text == '^':
            raise self.error("chained powers need parentheses", after)
        return node

    def parse_atom(self):
        token = self.take()
        if token.kind == 'int':
            return SourceNode('num', token.span, int(token.text))
        if token.text == '(':
            inner = self.parse_binary(0)
            close = self.expect(')')
            return SourceNode(inner.kind, (token.start, close.end), inner.value, inner.children)
        if token.kind == 'ident':
            return self.parse_identifier(token)
        raise self.error(f"unexpected {token.text!r}", token)

    def parse_identifier(self, token):
        name = token.text
        if name not in IDENTIFIERS:
            raise UnknownIdentifier(f"unknown identifier {name!r}", token.span)
        if name == 'conj':
            self.expect('(')
            inner = self.parse_binary(0)
            close = self.expect(')')
            return SourceNode('conj', (token.start, close.end), None, [inner])
        if name == 'phi':
            self.expect('[')
            indices = []
            for position in range(3):
                if position:
                    self.expect(',')
                index = self.take()
                if index.kind != 'int':
                    raise self.error("jet indices must be integer literals", index)
                indices.append(int(index.text))
            close = self.expect(']')
            return SourceNode('phi', (token.start, close.end), tuple(indices))
        if name == 'i':
            return SourceNode('unit', token.span)
        return SourceNode('ident', token.span, name)


def parse_source(text: str) -> SourceNode:
    return _Parser(text).parse()


def lower(node: SourceNode):
    """
    Convert a syntax tree into an Expr.
    """
    kind = node.kind
    if kind == 'num':
        return const(node.value)
    if kind == 'unit':
        return I
    if kind == 'ident':
        return var(var_from_name(node.value))
    if kind == 'phi':
        return var(jet_var(*node.value))
    if kind == 'conj':
        return conjugate(lower(node.children[0]))
    if kind == 'neg':
        return neg(lower(node.children[0]))
    if kind == 'pow':
        base = lower(node.children[0])
        with _zero_denominator(node):
            return power(base, node.value)
    left, right = (lower(child) for child in node.children)
    if node.value == '+':
        return add(left, right)
    if node.value == '-':
        return sub(left, right)
    if node.value == '*':
        return mul(left, right)
    with _zero_denominator(node):
        return div(left, right)


@contextmanager
def _zero_denominator(node):
    try:
        yield
    except DivisionByZeroExpr as exc:
        raise ZeroDenominator(str(exc), node.span) from exc


def parse_expression(text: str):
    return lower(parse_source(text))


def parse_phi(text: str):
    """
    Parse a graphing function in z, zb, u and check that it is real.
    """
    from .zerotest import is_identically_zero

    phi = parse_expression(text)
    illegal = sorted(str(v) for v in phi.free_vars() if v.kind != 'base')
    if illegal:
        raise IllegalVariable(f"graphing function may only use z, zb, u; found {', '.join(illegal)}")
    residual = sub(conjugate(phi), phi)
    verdict = is_identically_zero(residual, mode='auto')
    if not verdict.zero:
        if verdict.witness is None:
            verdict = is_identically_zero(residual, mode='probabilistic')
        raise NotReal("graphing function is not real", verdict.witness)
    logger.debug(f"accepted graphing function {text!r}")
    return phi
