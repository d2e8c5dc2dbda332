"""
Double-precision evaluation and finite-difference cross-checks
"""
import logging

import numpy as np

from jets.calculus import specialize_phi, total_derivative
from symbolic import scalars
from symbolic.evaluation import Evaluator, eval_exact, eval_numeric
from symbolic.variables import base_var

logger = logging.getLogger(__name__)

STEP = 1e-4
RELATIVE_TOLERANCE = 1e-6
AGREEMENT = 1e-9


def exact_at(e, assignment):
    return eval_exact(e, assignment)


def numeric_at(e, assignment):
    return eval_numeric(e, assignment)


def agree(exact, numeric, tolerance=AGREEMENT):
    """
    True when the exact value and the double-precision value match to a
    relative tolerance.
    """
    reference = scalars.to_complex(exact)
    return abs(reference - numeric) <= tolerance * max(1.0, abs(reference))


def _as_complex(value):
    if isinstance(value, type(scalars.ONE)):
        return np.complex128(scalars.to_complex(value))
    return np.complex128(value)


def finite_difference(e, direction, point, step=STEP):
    """
    Central difference of a specialized expression in one base coordinate.
    z and zb are treated as independent complex coordinates.
    """
    v = base_var(direction)
    plus, minus = dict(point), dict(point)
    centre = _as_complex(point[v])
    plus[v] = centre + step
    minus[v] = centre - step
    upper = complex(Evaluator(plus, scalars.NUMERIC).value(e))
    lower = complex(Evaluator(minus, scalars.NUMERIC).value(e))
    return (upper - lower) / (2 * step)


def check_total_derivative(e, phi, direction, point, ctx=None, step=STEP):
    """
    Compare the total derivative of e with a central difference after
    specializing to a concrete phi. Returns (symbolic, difference, ok).
    """
    derivative = specialize_phi(total_derivative(e, direction, ctx), phi, ctx)
    specialized = specialize_phi(e, phi, ctx)
    symbolic = numeric_at(derivative, point)
    estimate = finite_difference(specialized, direction, point, step)
    ok = abs(symbolic - estimate) <= RELATIVE_TOLERANCE * max(1.0, abs(symbolic))
    logger.debug(f"D_{direction}: {symbolic} vs difference {estimate}")
    return symbolic, estimate, ok
