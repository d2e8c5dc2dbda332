"""
Total derivatives on the jet space of the graphing function, rigid
restriction and specialization to a concrete phi.
"""
import logging

from symbolic.exceptions import JetOrderExceeded
from symbolic.expr import ONE, ZERO, derive, partial, substitute, var
from symbolic.variables import base_var, jet_var

from .context import JetContext

logger = logging.getLogger(__name__)

DIRECTIONS = ('z', 'zb', 'u')


def total_derivative(e, direction, ctx=None):
    """
    D_z, D_zb or D_u: base coordinates differentiate to 0/1, jets bump
    their multi-index, group parameters are constants.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if ctx is None:
        ctx = JetContext.from_settings()

    def rule(v):
        if v.kind == 'base':
            return ONE if v.name == direction else ZERO
        if v.kind == 'group':
            return ZERO
        if ctx.rigid and (direction == 'u' or v.jet.c):
            return ZERO
        bumped = v.jet.bump(direction)
        if bumped.order > ctx.max_order:
            raise JetOrderExceeded(
                f"D_{direction} of {v} needs order {bumped.order} > {ctx.max_order}"
            )
        return var(jet_var(bumped.a, bumped.b, bumped.c))

    return derive(e, ctx.derivation_key(direction), rule)


def restrict_rigid(e):
    """
    Set every u-jet phi[a,b,c] with c > 0 to zero.
    """
    bindings = {v: ZERO for v in e.free_vars() if v.kind == 'jet' and v.jet.c}
    return substitute(e, bindings)


def jet_of(phi, a, b, c):
    """
    The exact partial derivative d_z^a d_zb^b d_u^c of a concrete phi.
    """
    result = phi
    for name, count in (('z', a), ('zb', b), ('u', c)):
        for _ in range(count):
            result = partial(result, base_var(name))
    return result


def specialize_phi(e, phi, ctx=None):
    """
    Replace each jet variable of e by the matching partial derivative of phi.
    """
    if ctx is None:
        ctx = JetContext.from_settings()
    bindings = {}
    for v in e.free_vars():
        if v.kind != 'jet':
            continue
        if v.jet.order > ctx.max_order:
            raise JetOrderExceeded(f"{v} exceeds order {ctx.max_order}")
        bindings[v] = jet_of(phi, v.jet.a, v.jet.b, v.jet.c)
    logger.debug(f"specializing {len(bindings)} jet variables")
    return substitute(e, bindings)
