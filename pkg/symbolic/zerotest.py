"""
Identical-vanishing test for expressions: canonical expansion, seeded
random evaluation, or canonical-with-fallback.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import scalars
from .canonical import expand_canonical
from .conf import engine_setting
from .evaluation import Evaluator
from .exceptions import ExpansionOverflow, PoleAtPoint, SingularLocusExhausted
from .expr import as_expr, free_vars
from .sampling import format_assignment, real_consistent_assignment

logger = logging.getLogger(__name__)

MODES = ('canonical', 'probabilistic', 'auto')


@dataclass
class Verdict:
    zero: bool
    mode: str
    trials: int = 0
    witness: Optional[dict] = None
    residual: Optional[str] = None
    work: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self):
        data = {'zero': self.zero, 'mode': self.mode, 'trials': self.trials, 'work': self.work}
        if self.witness is not None:
            data['witness'] = self.witness
        if self.residual is not None:
            data['residual'] = self.residual
        return data


def is_identically_zero(e, mode='auto', trials=None, seed=None, budget=None,
                        bound=None, fixed=None, rng=None):
    """
    Decide whether e vanishes identically.

    probabilistic: evaluate at `trials` reality-consistent points drawn
    from a numpy Generator seeded by `seed` (or the supplied rng); the
    first nonzero value is returned as witness.
    canonical: exact expansion, raises ExpansionOverflow past budget.
    auto: canonical, falling back to probabilistic on overflow.
    fixed pins some variables to given values at every point.
    """
    if mode not in MODES:
        raise ValueError(f"unknown zero-test mode {mode!r}")
    e = as_expr(e)
    if e.is_const:
        return Verdict(zero=not e.payload, mode='structural',
                       residual=None if not e.payload else scalars.format_gaussian(e.payload))
    if mode in ('canonical', 'auto'):
        try:
            normal = expand_canonical(e, budget)
        except ExpansionOverflow:
            if mode == 'canonical':
                raise
            logger.debug("canonical expansion over budget, falling back to sampling")
        else:
            return Verdict(zero=normal.is_zero, mode='canonical', work=normal.work)
    return _probabilistic(e, trials, seed, bound, fixed, rng)


def _probabilistic(e, trials, seed, bound, fixed, rng):
    if trials is None:
        trials = engine_setting('TRIALS')
    if trials < 1:
        raise ValueError("at least one trial is required")
    if rng is None:
        rng = np.random.default_rng(engine_setting('SEED') if seed is None else seed)
    retry_budget = engine_setting('RETRY_BUDGET')
    variables = free_vars(e)
    work = 0
    for trial in range(trials):
        for _ in range(retry_budget):
            point = real_consistent_assignment(variables, rng, bound, fixed)
            evaluator = Evaluator(point)
            try:
                value = evaluator.value(e)
            except PoleAtPoint:
                continue
            finally:
                work += len(evaluator.cache)
            break
        else:
            raise SingularLocusExhausted(f"no regular point found in {retry_budget} draws")
        if value:
            logger.debug(f"nonzero value at trial {trial}")
            return Verdict(zero=False, mode='probabilistic', trials=trial + 1,
                           witness=format_assignment({v: point[v] for v in variables}),
                           residual=scalars.format_gaussian(value), work=work)
    return Verdict(zero=True, mode='probabilistic', trials=trials, work=work)
