"""
Hash-consed rational expression DAG over Gaussian rationals.

Every node is interned: two structurally equal expressions are the same
Python object, so identity comparison is structural comparison and
derivative, conjugate and sentinel caches live on the nodes themselves.
The caches are memo slots, never part of a node's value, and are only
written while holding the module lock.
"""
import hashlib
import itertools
import logging
import threading
import weakref
from fractions import Fraction

from sympy.polys.domains import QQ_I

from . import scalars
from .exceptions import CyclicBinding, DivisionByZeroExpr
from .variables import VarId

logger = logging.getLogger(__name__)

CONST, VAR, ADD, MUL, DIV, POW = 'const', 'var', 'add', 'mul', 'div', 'pow'

_INTERN = weakref.WeakValueDictionary()
_SERIAL = itertools.count()
_UNSET = object()
# guards interning and every write to the per-node caches
_LOCK = threading.RLock()


class Expr:
    """
    Immutable DAG node. Build nodes through the module constructors
    (const, var, add, mul, div, power) or the arithmetic operators.
    """
    __slots__ = ('op', 'args', 'payload', 'serial', 'conj_cache',
                 'derivatives', 'sentinel', '__weakref__')

    def __init__(self, op, args, payload):
        self.op = op
        self.args = args
        self.payload = payload
        self.serial = next(_SERIAL)
        self.conj_cache = None
        self.derivatives = None
        self.sentinel = _UNSET

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        return power(self, n)

    # inspection ---------------------------------------------------------
    @property
    def is_const(self):
        return self.op == CONST

    @property
    def is_zero_const(self):
        return self.op == CONST and not self.payload

    def conjugate(self):
        return conjugate(self)

    def substitute(self, bindings):
        return substitute(self, bindings)

    def free_vars(self):
        return free_vars(self)

    def __repr__(self):
        if self.op == CONST:
            return f"Expr({scalars.format_gaussian(self.payload)})"
        if self.op == VAR:
            return f"Expr({self.payload})"
        return f"Expr(<{self.op} #{self.serial}>)"


def _rank(node):
    if node.op == CONST:
        return (0, 0, 0, 0, 0, 0)
    if node.op == VAR:
        return (1,) + node.payload.sort_key
    return (2, node.serial, 0, 0, 0, 0)


def _make(op, args, payload):
    key = (op, payload, args)
    with _LOCK:
        node = _INTERN.get(key)
        if node is None:
            node = Expr(op, args, payload)
            _INTERN[key] = node
    return node


# constructors -----------------------------------------------------------

def as_expr(value):
    if isinstance(value, Expr):
        return value
    return const(value)


def const(value):
    if isinstance(value, Fraction):
        value = scalars.gaussian(value)
    elif isinstance(value, complex):
        raise TypeError("floating point constants are not allowed")
    elif not isinstance(value, type(scalars.ONE)):
        value = QQ_I.convert(value)
    return _make(CONST, (), value)


def var(v: VarId):
    return _make(VAR, (), v)


ZERO = const(0)
ONE = const(1)
I = const(scalars.I)


def _split_coefficient(term):
    if term.op == MUL and term.args[0].op == CONST:
        rest = term.args[1:]
        core = rest[0] if len(rest) == 1 else _make(MUL, rest, None)
        return term.args[0].payload, core
    return scalars.ONE, term


def add(*terms):
    flat = []
    for term in terms:
        term = as_expr(term)
        if term.op == ADD:
            flat.extend(term.args)
        else:
            flat.append(term)
    constant = scalars.ZERO
    collected = {}
    for term in flat:
        if term.op == CONST:
            constant = constant + term.payload
            continue
        coefficient, core = _split_coefficient(term)
        collected[core] = collected.get(core, scalars.ZERO) + coefficient
    out = []
    for core, coefficient in collected.items():
        if not coefficient:
            continue
        out.append(core if coefficient == scalars.ONE else mul(const(coefficient), core))
    if constant:
        out.append(const(constant))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=_rank)
    return _make(ADD, tuple(out), None)


def mul(*factors):
    flat = []
    for factor in factors:
        factor = as_expr(factor)
        if factor.op == MUL:
            flat.extend(factor.args)
        else:
            flat.append(factor)
    constant = scalars.ONE
    exponents = {}
    for factor in flat:
        if factor.op == CONST:
            if not factor.payload:
                return ZERO
            constant = constant * factor.payload
            continue
        if factor.op == POW:
            base, n = factor.args[0], factor.payload
        else:
            base, n = factor, 1
        exponents[base] = exponents.get(base, 0) + n
    out = [base if n == 1 else power(base, n) for base, n in exponents.items()]
    if not out:
        return const(constant)
    out.sort(key=_rank)
    if constant != scalars.ONE:
        out.insert(0, const(constant))
    if len(out) == 1:
        return out[0]
    return _make(MUL, tuple(out), None)


def neg(e):
    return mul(const(-1), e)


def sub(a, b):
    return add(a, neg(as_expr(b)))


def power(base, n):
    base = as_expr(base)
    if not isinstance(n, int):
        raise TypeError("only integer exponents are supported")
    if n == 0:
        return ONE
    if n == 1:
        return base
    if n < 0:
        return div(ONE, power(base, -n))
    if base.op == CONST:
        return const(base.payload ** n)
    if base.op == POW:
        return power(base.args[0], base.payload * n)
    return _make(POW, (base,), n)


def div(a, b, trusted=False):
    """
    Quotient a/b. The denominator is zero-tested before any
    simplification unless the caller already knows it is nonzero.
    """
    a, b = as_expr(a), as_expr(b)
    if b.op == CONST:
        if not b.payload:
            raise DivisionByZeroExpr("division by the constant 0")
        return mul(a, const(scalars.ONE / b.payload))
    if not trusted:
        ensure_nonzero(b)
    if a.is_zero_const:
        return ZERO
    if a is b:
        return ONE
    # b is nonzero from here on, and so is each of its factors
    if b.op == DIV:
        return div(mul(a, b.args[1]), b.args[0], trusted=True)
    if a.op == DIV:
        return div(a.args[0], mul(a.args[1], b), trusted=True)
    return _make(DIV, (a, b), None)


def arith(e1, e2, op):
    if op == '+':
        return add(e1, e2)
    if op == '-':
        return sub(e1, e2)
    if op == '*':
        return mul(e1, e2)
    if op == '/':
        return div(e1, e2)
    raise ValueError(f"unknown operator {op!r}")


# traversal --------------------------------------------------------------

def walk(roots, is_done=None):
    """
    Children-first order of every node reachable from roots, skipping
    subgraphs for which is_done(node) holds.
    """
    order = []
    seen = set()
    stack = [(root, False) for root in reversed(roots)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node in seen or (is_done is not None and is_done(node)):
            continue
        seen.add(node)
        stack.append((node, True))
        for child in node.args:
            if child not in seen:
                stack.append((child, False))
    return order


def free_vars(*exprs):
    return {node.payload for node in walk(exprs) if node.op == VAR}


def node_count(*exprs):
    return len(walk(exprs))


def rebuild(node, children):
    """
    Re-create node with replacement children through the simplifying
    constructors.
    """
    if node.op == ADD:
        return add(*children)
    if node.op == MUL:
        return mul(*children)
    if node.op == DIV:
        return div(children[0], children[1])
    if node.op == POW:
        return power(children[0], node.payload)
    return node


# sentinel zero check ------------------------------------------------------

def _sentinel_assignment(v, salt):
    digest = hashlib.blake2b(f"{salt}:{v}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, 'big')


def sentinel_value(e, salt=0):
    """
    Value of e in GF(p) at a hash-derived point; None when a pole is hit.
    Salt 0 values are cached on the nodes.
    """
    field = scalars.modular_field()
    if salt == 0:
        local = None
        cached = lambda node: node.sentinel is not _UNSET
    else:
        local = {}
        cached = lambda node: node in local

    def get(node):
        return node.sentinel if local is None else local[node]

    if local is not None:
        for node in walk([e], cached):
            local[node] = _modular_step(node, field, get, salt)
        return local[e]
    with _LOCK:
        for node in walk([e], cached):
            node.sentinel = _modular_step(node, field, get, salt)
        return e.sentinel


def _modular_step(node, field, get, salt):
    op = node.op
    if op == CONST:
        return field.from_gaussian(node.payload)
    if op == VAR:
        return field.from_int(_sentinel_assignment(node.payload, salt))
    values = [get(child) for child in node.args]
    if any(value is None for value in values):
        return None
    if op == ADD:
        total = field.zero
        for value in values:
            total += value
        return total
    if op == MUL:
        total = field.one
        for value in values:
            total *= value
        return total
    if op == DIV:
        if field.is_zero(values[1]):
            return None
        return values[0] / values[1]
    return values[0] ** node.payload


def ensure_nonzero(b):
    first = sentinel_value(b)
    if first is None or first:
        return
    second = sentinel_value(b, salt=1)
    if second is None or second:
        return
    raise DivisionByZeroExpr("denominator is identically zero")


# structural maps ----------------------------------------------------------

def conjugate(e):
    """
    The field involution: i -> -i, variables to their partners.
    """
    e = as_expr(e)
    with _LOCK:
        for node in walk([e], lambda n: n.conj_cache is not None):
            if node.op == CONST:
                image = const(scalars.conj(node.payload))
            elif node.op == VAR:
                image = var(node.payload.conjugate())
            elif node.op == DIV:
                image = div(node.args[0].conj_cache, node.args[1].conj_cache, trusted=True)
            else:
                image = rebuild(node, [child.conj_cache for child in node.args])
            node.conj_cache = image
            if image.conj_cache is None:
                image.conj_cache = node
        return e.conj_cache


def _resolve_bindings(bindings):
    """
    Close a binding map under itself so that no right-hand side mentions a
    bound variable; raise CyclicBinding on loops.
    """
    resolved = {}
    visiting = set()

    def resolve(v):
        if v in resolved:
            return resolved[v]
        if v in visiting:
            raise CyclicBinding(f"binding chain through {v} loops")
        visiting.add(v)
        rhs = as_expr(bindings[v])
        inner = {w: resolve(w) for w in free_vars(rhs) if w in bindings}
        result = _substitute_resolved(rhs, inner) if inner else rhs
        visiting.discard(v)
        resolved[v] = result
        return result

    for v in bindings:
        resolve(v)
    return resolved


def _substitute_resolved(e, resolved):
    images = {}
    for node in walk([e]):
        if node.op == VAR:
            images[node] = resolved.get(node.payload, node)
        elif node.op == CONST:
            images[node] = node
        else:
            images[node] = rebuild(node, [images[child] for child in node.args])
    return images[e]


def substitute(e, bindings):
    """
    Simultaneous substitution with chains resolved; unbound variables are
    left untouched.
    """
    e = as_expr(e)
    if not bindings:
        return e
    return _substitute_resolved(e, _resolve_bindings(bindings))


def substitute_many(exprs, bindings):
    resolved = _resolve_bindings(bindings)
    return [_substitute_resolved(as_expr(e), resolved) for e in exprs]


def derive(e, key, leaf_rule):
    """
    Apply the derivation identified by key. leaf_rule maps a VarId to the
    derivative of that variable. Results are cached per node and key.
    """
    e = as_expr(e)

    def done(node):
        return node.derivatives is not None and key in node.derivatives

    with _LOCK:
        for node in walk([e], done):
            if node.derivatives is None:
                node.derivatives = {}
            node.derivatives[key] = _derive_step(node, key, leaf_rule)
        return e.derivatives[key]


def _derive_step(node, key, leaf_rule):
    op = node.op
    if op == CONST:
        return ZERO
    if op == VAR:
        return leaf_rule(node.payload)
    d = [child.derivatives[key] for child in node.args]
    if op == ADD:
        return add(*d)
    if op == MUL:
        terms = []
        for index, dchild in enumerate(d):
            if dchild.is_zero_const:
                continue
            factors = list(node.args)
            factors[index] = dchild
            terms.append(mul(*factors))
        return add(*terms)
    if op == DIV:
        numerator, denominator = node.args
        da, db = d
        if db.is_zero_const:
            return div(da, denominator, trusted=True)
        return div(sub(da, mul(node, db)), denominator, trusted=True)
    base = node.args[0]
    n = node.payload
    if d[0].is_zero_const:
        return ZERO
    return mul(const(n), power(base, n - 1), d[0])


def partial(e, v: VarId):
    """
    Plain partial derivative with respect to one variable.
    """
    target = v

    def rule(w):
        return ONE if w == target else ZERO

    return derive(e, ('partial', v), rule)
