"""
Canonical expansion of expressions into a reduced fraction of sparse
polynomials over QQ_I.

The generators are the free variables of the expression in their fixed
order (base < jets by graded multi-index < group). Fractions are kept
with a monic denominator and the common monomial factor cancelled; no
full multivariate gcd is taken.
"""
import logging
from dataclasses import dataclass, field
from typing import Tuple

from sympy import Symbol
from sympy.polys.domains import QQ_I
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .conf import engine_setting
from .exceptions import DivisionByZeroExpr, ExpansionOverflow
from .expr import ADD, CONST, DIV, MUL, VAR, add, as_expr, const, div, mul, power, var, walk

logger = logging.getLogger(__name__)


def _ring_for(variables):
    symbols = [Symbol(str(v)) for v in variables]
    if not symbols:
        symbols = [Symbol('_1')]
    return PolyRing(symbols, QQ_I, lex)


@dataclass
class NormalForm:
    """
    numerator/denominator over `ring`, generators named after `variables`
    """
    numerator: object
    denominator: object
    variables: Tuple = ()
    work: int = 0
    ring: object = field(default=None, repr=False)

    @property
    def monomial_count(self):
        return len(self.numerator)

    @property
    def is_zero(self):
        return not self.numerator

    def as_expr(self):
        return div(_poly_to_expr(self.numerator, self.variables),
                   _poly_to_expr(self.denominator, self.variables))

    def numerator_expr(self):
        return _poly_to_expr(self.numerator, self.variables)

    def denominator_expr(self):
        return _poly_to_expr(self.denominator, self.variables)

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (self.variables == other.variables
                and dict(self.numerator) == dict(other.numerator)
                and dict(self.denominator) == dict(other.denominator))


def _poly_to_expr(poly, variables):
    terms = []
    for monom, coefficient in poly.terms():
        factors = [const(coefficient)]
        for v, k in zip(variables, monom):
            if k:
                factors.append(power(var(v), k))
        terms.append(mul(*factors))
    return add(*terms)


class _Expander:
    def __init__(self, variables, budget):
        self.variables = variables
        self.ring = _ring_for(variables)
        self.index = {v: n for n, v in enumerate(variables)}
        self.budget = budget
        self.work = 0

    def charge(self, amount):
        self.work += amount
        if self.work > self.budget:
            raise ExpansionOverflow(
                f"canonical expansion exceeded the budget of {self.budget} term operations"
            )

    def multiply(self, p, q):
        self.charge(len(p) * len(q))
        return p * q

    def normalize(self, num, den):
        ring = self.ring
        if not num:
            return ring.zero, ring.one
        lc = den.LC
        if lc != ring.domain.one:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        shift = None
        for monom in list(num.itermonoms()) + list(den.itermonoms()):
            shift = monom if shift is None else tuple(min(x, y) for x, y in zip(shift, monom))
        if shift is not None and any(shift):
            num = ring.from_dict({tuple(x - y for x, y in zip(m, shift)): c for m, c in num.items()})
            den = ring.from_dict({tuple(x - y for x, y in zip(m, shift)): c for m, c in den.items()})
        return num, den

    def add_fractions(self, left, right):
        n1, d1 = left
        n2, d2 = right
        if not n1:
            return right
        if not n2:
            return left
        if d1 == d2:
            self.charge(len(n1) + len(n2))
            return self.normalize(n1 + n2, d1)
        if len(d1) == 1 and len(d2) == 1:
            (m1, _), = d1.items()
            (m2, _), = d2.items()
            lcm = tuple(max(x, y) for x, y in zip(m1, m2))
            lift1 = tuple(x - y for x, y in zip(lcm, m1))
            lift2 = tuple(x - y for x, y in zip(lcm, m2))
            self.charge(len(n1) + len(n2))
            num = n1.mul_monom(lift1) + n2.mul_monom(lift2)
            return self.normalize(num, self.ring({lcm: self.ring.domain.one}))
        num = self.multiply(n1, d2) + self.multiply(n2, d1)
        return self.normalize(num, self.multiply(d1, d2))

    def step(self, node, images):
        ring = self.ring
        op = node.op
        if op == CONST:
            return ring.ground_new(node.payload), ring.one
        if op == VAR:
            return ring.gens[self.index[node.payload]], ring.one
        children = [images[child] for child in node.args]
        if op == ADD:
            total = (ring.zero, ring.one)
            for child in children:
                total = self.add_fractions(total, child)
            return total
        if op == MUL:
            num, den = ring.one, ring.one
            for n, d in children:
                num = self.multiply(num, n)
                den = self.multiply(den, d)
                num, den = self.normalize(num, den)
                if not num:
                    return ring.zero, ring.one
            return num, den
        if op == DIV:
            (n1, d1), (n2, d2) = children
            if not n2:
                raise DivisionByZeroExpr("denominator expands to zero")
            return self.normalize(self.multiply(n1, d2), self.multiply(d1, n2))
        n, d = children[0]
        num, den = ring.one, ring.one
        for _ in range(node.payload):
            num = self.multiply(num, n)
            den = self.multiply(den, d)
        return self.normalize(num, den)


def expand_canonical(e, budget=None):
    """
    Fully expand e into a NormalForm; raises ExpansionOverflow once the
    accumulated term work passes the budget.
    """
    e = as_expr(e)
    if budget is None:
        budget = engine_setting('NODE_BUDGET')
    order = walk([e])
    variables = tuple(sorted({node.payload for node in order if node.op == VAR},
                             key=lambda v: v.sort_key))
    expander = _Expander(variables, budget)
    images = {}
    for node in order:
        images[node] = expander.step(node, images)
    num, den = images[e]
    logger.debug(f"expanded {len(order)} nodes into {len(num)}/{len(den)} terms, work {expander.work}")
    return NormalForm(num, den, variables, expander.work, expander.ring)
