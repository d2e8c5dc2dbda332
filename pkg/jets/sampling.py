"""
Reality-consistent random jet points away from a singular locus
"""
import logging

import numpy as np

from symbolic import scalars
from symbolic.conf import engine_setting
from symbolic.evaluation import Evaluator
from symbolic.exceptions import PoleAtPoint, SingularLocusExhausted
from symbolic.expr import free_vars
from symbolic.sampling import real_consistent_assignment

logger = logging.getLogger(__name__)


def random_real_assignment(seed, ctx, exclusions, variables=(), fixed=None, bound=None):
    """
    Draw a point for every variable of the exclusions (plus `variables`)
    such that each exclusion evaluates to a finite nonzero value.

    seed may be an int or an existing numpy Generator.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    wanted = set(variables) | free_vars(*exclusions)
    fixed = dict(fixed or {})
    if ctx is not None and ctx.rigid:
        fixed.update({v: scalars.ZERO for v in wanted if v.kind == 'jet' and v.jet.c})
    retries = engine_setting('RETRY_BUDGET')
    for attempt in range(retries):
        point = real_consistent_assignment(wanted, rng, bound, fixed)
        evaluator = Evaluator(point)
        try:
            if all(evaluator.value(e) for e in exclusions):
                return point
        except PoleAtPoint:
            pass
        logger.debug(f"redrawing singular point (attempt {attempt + 1})")
    raise SingularLocusExhausted(f"every one of {retries} draws hit the singular locus")
