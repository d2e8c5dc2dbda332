"""
Point evaluation of expression DAGs over a chosen field
"""
import numpy as np

from . import scalars
from .exceptions import PoleAtPoint, UnboundVariable
from .expr import ADD, CONST, DIV, MUL, VAR, as_expr, walk


class Evaluator:
    """
    Evaluates many expressions at one point, sharing a per-node cache.

    assignment maps VarId to Gaussian rationals (or, for the numeric
    field, to anything numpy can turn into a complex128).
    """

    def __init__(self, assignment, field=scalars.EXACT):
        self.field = field
        self.assignment = {v: self._coerce(value) for v, value in assignment.items()}
        self.cache = {}

    def _coerce(self, value):
        if isinstance(value, type(scalars.ONE)):
            return self.field.from_gaussian(value)
        if self.field is scalars.EXACT or self.field.name == 'exact':
            return scalars.QQ_I.convert(value)
        if self.field.name == 'numeric':
            return np.complex128(value)
        return self.field.from_int(value)

    def value(self, e):
        e = as_expr(e)
        cache = self.cache
        for node in walk([e], cache.__contains__):
            cache[node] = self._step(node)
        return cache[e]

    def values(self, exprs):
        return [self.value(e) for e in exprs]

    def _step(self, node):
        op = node.op
        field = self.field
        if op == CONST:
            return field.from_gaussian(node.payload)
        if op == VAR:
            try:
                return self.assignment[node.payload]
            except KeyError:
                raise UnboundVariable(f"no value for {node.payload}") from None
        values = [self.cache[child] for child in node.args]
        if op == ADD:
            total = field.zero
            for value in values:
                total = total + value
            return total
        if op == MUL:
            total = field.one
            for value in values:
                total = total * value
            return total
        if op == DIV:
            if field.is_zero(values[1]):
                raise PoleAtPoint("denominator vanishes at the sample point")
            return values[0] / values[1]
        return values[0] ** node.payload


def eval_exact(e, assignment):
    return Evaluator(assignment).value(e)


def eval_numeric(e, assignment):
    return complex(Evaluator(assignment, scalars.NUMERIC).value(e))
