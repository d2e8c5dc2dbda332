"""
Scalar fields used by the evaluator.

Exact values live in sympy's Gaussian rational field QQ_I. The quotient
sentinel works in a prime field with a square root of -1, and the numeric
window uses numpy complex doubles.
"""
from fractions import Fraction

import numpy as np
from sympy.ntheory import sqrt_mod
from sympy.polys.domains import GF, QQ, QQ_I

ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)

# largest prime below 2**64; congruent to 1 mod 4 so sqrt(-1) exists
SENTINEL_PRIME = 2**64 - 59


def gaussian(re, im=0):
    """
    Build a Gaussian rational from ints, Fractions or (num, den) pairs.
    """
    return QQ_I(_rational(re), _rational(im))


def _rational(value):
    if isinstance(value, tuple):
        return QQ(*value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ.convert(value)


def conj(q):
    return QQ_I(q.x, -q.y)


def parts(q):
    """
    (re_num, re_den, im_num, im_den) with positive reduced denominators
    """
    return (int(q.x.numerator), int(q.x.denominator),
            int(q.y.numerator), int(q.y.denominator))


def is_real(q):
    return not q.y


def to_complex(q):
    re_num, re_den, im_num, im_den = parts(q)
    return complex(Fraction(re_num, re_den), Fraction(im_num, im_den))


def format_gaussian(q):
    """
    Plain text form re-parseable by the expression grammar.
    """
    re_num, re_den, im_num, im_den = parts(q)
    re = _format_rational(re_num, re_den)
    if not im_num:
        return re
    im = 'i' if (im_num, im_den) == (1, 1) else f"{_format_rational(im_num, im_den)}*i"
    if (im_num, im_den) == (-1, 1):
        im = '-i'
    if not re_num:
        return im
    if im.startswith('-'):
        return f"{re} - {im[1:]}"
    return f"{re} + {im}"


def _format_rational(num, den):
    return str(num) if den == 1 else f"{num}/{den}"


class ExactField:
    """
    Exact evaluation over QQ_I
    """
    name = 'exact'
    zero = ZERO
    one = ONE

    def from_gaussian(self, q):
        return q

    def is_zero(self, value):
        return not value

    def to_gaussian(self, value):
        return value


class ModularField:
    """
    Evaluation modulo SENTINEL_PRIME with i mapped to a fixed sqrt(-1)
    """
    name = 'modular'

    def __init__(self, prime=SENTINEL_PRIME):
        self.domain = GF(prime)
        self.prime = prime
        self.imaginary_unit = self.domain(sqrt_mod(prime - 1, prime))
        self.zero = self.domain.zero
        self.one = self.domain.one

    def from_gaussian(self, q):
        re_num, re_den, im_num, im_den = parts(q)
        K = self.domain
        value = K(re_num) / K(re_den)
        if im_num:
            value += self.imaginary_unit * (K(im_num) / K(im_den))
        return value

    def from_int(self, n):
        return self.domain(n)

    def is_zero(self, value):
        return not value


class ComplexField:
    """
    Double-precision complex evaluation for the numeric window
    """
    name = 'numeric'
    zero = np.complex128(0)
    one = np.complex128(1)

    def __init__(self, tolerance=0.0):
        self.tolerance = tolerance

    def from_gaussian(self, q):
        return np.complex128(to_complex(q))

    def is_zero(self, value):
        return abs(value) <= self.tolerance


EXACT = ExactField()
NUMERIC = ComplexField()
_modular = None


def modular_field():
    global _modular
    if _modular is None:
        _modular = ModularField()
    return _modular
