"""
Sparse exterior algebra with expression coefficients.

A Form of degree k stores {(i1 < ... < ik): coefficient} over a Basis of
named 1-forms. Coordinate bases name the differentials of their
variables; lifted bases name a coframe.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from jets.calculus import total_derivative
from symbolic.exceptions import DegreeOverflow, UnrewritableCoefficient
from symbolic.expr import ZERO, add, as_expr, conjugate, free_vars, mul, neg, partial, substitute

logger = logging.getLogger(__name__)

MAX_DEGREE = 3


@dataclass(frozen=True)
class Basis:
    kind: str
    names: tuple
    variables: Optional[tuple] = None

    @classmethod
    def coordinates(cls, variables):
        variables = tuple(variables)
        return cls('coordinate', tuple(f"d{v}" for v in variables), variables)

    @classmethod
    def lifted(cls, names):
        return cls('lifted', tuple(names))

    @property
    def size(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def index_of_variable(self, v):
        return self.variables.index(v)


def _merge(left, right):
    """
    Sorted concatenation of two index tuples and the permutation sign;
    None when an index repeats.
    """
    if set(left) & set(right):
        return None, 0
    merged = list(left) + list(right)
    sign = 1
    # bubble sort counts transpositions; tuples have at most 3 entries
    for i in range(len(merged)):
        for j in range(len(merged) - 1 - i):
            if merged[j] > merged[j + 1]:
                merged[j], merged[j + 1] = merged[j + 1], merged[j]
                sign = -sign
    return tuple(merged), sign


class Form:
    __slots__ = ('degree', 'terms', 'basis')

    def __init__(self, degree, terms, basis):
        if degree > MAX_DEGREE:
            raise DegreeOverflow(f"{degree}-forms exceed the supported degree {MAX_DEGREE}")
        self.degree = degree
        self.basis = basis
        self.terms = {key: value for key, value in terms.items() if not value.is_zero_const}

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, degree, basis):
        return cls(degree, {}, basis)

    @classmethod
    def function(cls, f, basis):
        return cls(0, {(): as_expr(f)}, basis)

    @classmethod
    def one_form(cls, basis, coefficients):
        """
        coefficients maps basis names (or indices) to expressions.
        """
        terms = {}
        for name, value in coefficients.items():
            index = name if isinstance(name, int) else basis.index(name)
            terms[(index,)] = add(terms.get((index,), ZERO), as_expr(value))
        return cls(1, terms, basis)

    @classmethod
    def basis_form(cls, basis, name):
        return cls.one_form(basis, {name: 1})

    # algebra ----------------------------------------------------------
    def _check(self, other):
        if other.basis != self.basis:
            raise ValueError("forms live over different bases")
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError("cannot add forms of different degree")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = add(terms[key], value) if key in terms else value
        return Form(max(self.degree, other.degree), terms, self.basis)

    def __neg__(self):
        return Form(self.degree, {key: neg(value) for key, value in self.terms.items()}, self.basis)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        f = as_expr(f)
        if f.is_zero_const:
            return Form.zero(self.degree, self.basis)
        return Form(self.degree, {key: mul(f, value) for key, value in self.terms.items()}, self.basis)

    def coefficient(self, *names):
        """
        Coefficient of the wedge of the named basis elements, in the
        order given.
        """
        indices = tuple(n if isinstance(n, int) else self.basis.index(n) for n in names)
        if len(set(indices)) < len(indices):
            return ZERO
        key, sign = _merge((), indices)
        value = self.terms.get(key, ZERO)
        return value if sign > 0 else neg(value)

    def map_coefficients(self, fn):
        return Form(self.degree, {key: fn(value) for key, value in self.terms.items()}, self.basis)

    @property
    def is_zero(self):
        return not self.terms

    def __repr__(self):
        names = self.basis.names
        parts = [f"{value!r}*{'^'.join(names[i] for i in key) or '1'}" for key, value in self.terms.items()]
        return f"Form[{self.degree}]({' + '.join(parts) or '0'})"


def wedge(*forms):
    """
    Graded exterior product of one or more forms.
    """
    result = forms[0]
    for other in forms[1:]:
        if other.basis != result.basis:
            raise ValueError("forms live over different bases")
        degree = result.degree + other.degree
        if degree > MAX_DEGREE:
            raise DegreeOverflow(f"wedge would produce a {degree}-form")
        terms = {}
        for left_key, left in result.terms.items():
            for right_key, right in other.terms.items():
                key, sign = _merge(left_key, right_key)
                if key is None:
                    continue
                product = mul(left, right) if sign > 0 else neg(mul(left, right))
                terms[key] = add(terms[key], product) if key in terms else product
        result = Form(degree, terms, result.basis)
    return result


def differential(f, basis, ctx):
    """
    d of a function in a coordinate basis: base directions use total
    derivatives, fiber coordinates plain partials.
    """
    if basis.kind != 'coordinate':
        raise ValueError("functions are differentiated in a coordinate basis")
    f = as_expr(f)
    allowed = set(basis.variables)
    stray = [v for v in free_vars(f) if v.kind != 'jet' and v not in allowed]
    if stray:
        raise UnrewritableCoefficient(
            f"coefficient depends on {', '.join(sorted(map(str, stray)))} outside the stage coordinates"
        )
    terms = {}
    for index, v in enumerate(basis.variables):
        if v.kind == 'base':
            derivative = total_derivative(f, v.name, ctx)
        else:
            derivative = partial(f, v)
        if not derivative.is_zero_const:
            terms[(index,)] = derivative
    return Form(1, terms, basis)


def exterior_d(w, ctx):
    """
    Coordinate-basis exterior derivative; coordinate differentials are closed.
    """
    basis = w.basis
    result = Form.zero(w.degree + 1, basis)
    for key, value in w.terms.items():
        df = differential(value, basis, ctx)
        result = result + wedge(df, Form(w.degree, {key: as_expr(1)}, basis))
    return result


def substitute_form(w, bindings):
    if not bindings:
        return w
    return w.map_coefficients(lambda value: substitute(value, bindings))


def contract(w, vector):
    """
    Pairing of a coordinate 1-form with a vector given as a tuple of
    components in the basis order.
    """
    if w.degree != 1:
        raise ValueError("only 1-forms pair with vectors")
    return add(*(mul(value, as_expr(vector[key[0]])) for key, value in w.terms.items()))


def conjugate_form(w, conjugate_differential):
    """
    Conjugate a coordinate form. conjugate_differential maps a basis index
    to the 1-form conj(dx_index); bound partners are expressed through
    their bindings by the caller.
    """
    basis = w.basis
    result = Form.zero(w.degree, basis)
    for key, value in w.terms.items():
        factors = [conjugate_differential(index) for index in key]
        image = Form.function(conjugate(value), basis)
        for factor in factors:
            image = wedge(image, factor)
        result = result + image
    return result
