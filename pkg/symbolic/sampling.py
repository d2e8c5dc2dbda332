"""
Reality-consistent random points for probabilistic identity testing
"""
from . import scalars
from .conf import engine_setting


def _draw_rational(rng, bound):
    return (int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def draw_value(rng, bound, real=False):
    re = _draw_rational(rng, bound)
    if real:
        return scalars.gaussian(re)
    return scalars.gaussian(re, _draw_rational(rng, bound))


def real_consistent_assignment(variables, rng, bound=None, fixed=None):
    """
    Draw one value per conjugate pair and give the partner its conjugate.
    Self-conjugate variables (u, diagonal jets) receive real values.
    Variables are visited in their canonical order so that a seeded rng
    always yields the same point.
    """
    if bound is None:
        bound = engine_setting('SAMPLE_BOUND')
    assignment = dict(fixed or {})
    for v in sorted(variables, key=lambda w: w.sort_key):
        if v in assignment:
            continue
        partner = v.conjugate()
        if partner == v:
            assignment[v] = draw_value(rng, bound, real=True)
        elif partner in assignment:
            assignment[v] = scalars.conj(assignment[partner])
        else:
            value = draw_value(rng, bound)
            assignment[v] = value
            assignment[partner] = scalars.conj(value)
    return assignment


def format_assignment(assignment):
    """
    JSON-friendly {name: text} view in canonical variable order
    """
    return {str(v): scalars.format_gaussian(assignment[v])
            for v in sorted(assignment, key=lambda w: w.sort_key)}
