"""
The invariant pipeline over generic jets of the graphing function:
A, ell, P, the first-loop torsions, the normalization cascade of the
group parameters and the essential invariants J, Tfrak, Delta1, Delta4.

Every compute_* function is memoized per (JetContext, GroupParams); the
returned expressions are shared DAG nodes.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache

from jets.calculus import restrict_rigid, total_derivative
from jets.context import JetContext
from jets.fields import make_frame
from symbolic.exceptions import UnboundSbar
from symbolic.expr import I, ONE, conjugate, var
from symbolic.variables import jet_var

from . import displays
from .group import GroupParams

logger = logging.getLogger(__name__)


def _context(ctx):
    return JetContext.from_settings() if ctx is None else ctx


def _phi(a, b, c):
    return var(jet_var(a, b, c))


@lru_cache(maxsize=None)
def _A(ctx):
    A = I * _phi(1, 0, 0) / (ONE - I * _phi(0, 0, 1))
    return restrict_rigid(A) if ctx.rigid else A


@lru_cache(maxsize=None)
def _ell(ctx):
    A = _A(ctx)
    Ab = conjugate(A)

    def D(e, direction):
        return total_derivative(e, direction, ctx)

    ell = I * (D(Ab, 'z') + A * D(Ab, 'u') - D(A, 'zb') - Ab * D(A, 'u'))
    return restrict_rigid(ell) if ctx.rigid else ell


@lru_cache(maxsize=None)
def _P(ctx):
    A, ell = _A(ctx), _ell(ctx)

    def D(e, direction):
        return total_derivative(e, direction, ctx)

    return (D(ell, 'z') - ell * D(A, 'u') + A * D(ell, 'u')) / ell


def compute_A(ctx=None):
    """
    A = i phi_z / (1 - i phi_u)
    """
    return _A(_context(ctx))


def compute_ell(ctx=None):
    """
    The Levi factor i (Ab_z + A Ab_u - A_zb - Ab A_u); real.
    """
    return _ell(_context(ctx))


def compute_P(ctx=None):
    return _P(_context(ctx))


@lru_cache(maxsize=None)
def _frame(ctx):
    return make_frame(ctx)


class FormulaScope:
    """
    Names used by the transcribed formulas: P, Pb, Phi1, Phi2, the group
    parameters (bound ones already replaced) and the operators L, Lb, T,
    H1 = L + Lb, H2 = i (L - Lb).
    """

    def __init__(self, ctx, gp):
        self.ctx = ctx
        self.gp = gp
        self.frame = _frame(ctx)
        self.P = _P(ctx)
        self.Pb = conjugate(self.P)
        self.Phi1 = self.P + self.Pb
        self.Phi2 = I * (self.P - self.Pb)
        self.b, self.bb, self.c, self.cb = gp.b, gp.bb, gp.c, gp.cb
        self.s, self.sb, self.r, self.rb = gp.s, gp.sb, gp.r, gp.rb

    def L(self, e):
        return self.frame.apply_L(e)

    def Lb(self, e):
        return self.frame.apply_Lbar(e)

    def T(self, e):
        return self.frame.apply_T(e)

    def H1(self, e):
        return self.L(e) + self.Lb(e)

    def H2(self, e):
        return I * (self.L(e) - self.Lb(e))


@lru_cache(maxsize=None)
def formula_scope(ctx=None, gp=GroupParams()):
    return FormulaScope(_context(ctx), gp)


def compute_first_torsions(gp=GroupParams(), ctx=None):
    """
    Torsions of the lifted structure equations after a = c cb.
    """
    x = formula_scope(ctx, gp)
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    return {
        'U1': (P * cb + bb * I) / (c * cb),
        'U2': I,
        'V1': (P * b * cb + bb * b * I) / (c**2 * cb**2),
        'V2': (Pb * b * c - b**2 * I) / (c**2 * cb**2),
        'V3': b * I / (c * cb),
    }


def compute_W(gp=GroupParams(), ctx=None):
    """
    The real torsion of d alpha on the prolonged space. Uses the bound
    value of sb when gp carries one.
    """
    x = formula_scope(ctx, gp)
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    return (
        x.Lb(P) / (c * cb)
        - 2 * I * b * P / (c**2 * cb)
        + 2 * I * bb * Pb / (c * cb**2)
        + 6 * b * bb / (c**2 * cb**2)
        + 2 * I * x.s
        - 2 * I * x.sb
    )


def sbar_rhs(gp=GroupParams(), ctx=None):
    x = formula_scope(ctx, gp)
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    return (
        x.s
        - F(1, 2) * I * x.Lb(P) / (c * cb)
        - b * P / (c**2 * cb)
        + bb * Pb / (c * cb**2)
        - 3 * I * b * bb / (c**2 * cb**2)
    )


def bind_sbar(gp=GroupParams(), ctx=None):
    """
    Normalize W to zero by eliminating sb.
    """
    return gp.bind(sb=sbar_rhs(gp, ctx))


def r_rhs(gp=GroupParams(), ctx=None):
    x = formula_scope(ctx, gp)
    L, Lb = x.L, x.Lb
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    return (
        -F(1, 3) * L(Lb(Pb)) / (c * cb**2)
        + F(1, 2) * Lb(Lb(P)) / (c * cb**2)
        - F(1, 2) * I * Lb(P) * b / (c**2 * cb**2)
        - F(1, 6) * Pb * Lb(P) / (c * cb**2)
        + Pb * b * bb / (c**2 * cb**3)
        - I * b**2 * bb / (c**3 * cb**3)
    )


def bind_r(gp, ctx=None):
    rhs = r_rhs(gp, ctx)
    return gp.bind(r=rhs, rb=conjugate(rhs))


def compute_W2(gp=GroupParams(), ctx=None):
    """
    The zeta coefficient of conj(delta) - delta; vanishes once r is bound.
    """
    x = formula_scope(ctx, gp)
    L, Lb = x.L, x.Lb
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    return (
        I * Lb(L(P)) / (c**2 * cb)
        - F(3, 2) * I * L(L(Pb)) / (c**2 * cb)
        + F(3, 2) * L(Pb) * bb / (c**2 * cb**2)
        + F(1, 2) * I * P * L(Pb) / (c**2 * cb)
        - 3 * I * P * b * bb / (c**3 * cb**2)
        + 3 * b * bb**2 / (c**3 * cb**3)
        + 3 * I * x.rb
    )


def compute_W1_general(gp=GroupParams(), ctx=None):
    """
    i W1 is the rho coefficient of conj(delta) - delta, with s, sb, r, rb
    as given by gp.
    """
    x = formula_scope(ctx, gp)
    L, Lb, T = x.L, x.Lb, x.T
    P, Pb, b, bb, c, cb = x.P, x.Pb, x.b, x.bb, x.c, x.cb
    s_coefficient = (
        -F(1, 2) * L(Pb) / (c * cb)
        + I * P * b / (c**2 * cb)
        - 3 * b * bb / (c**2 * cb**2)
        - I * Pb * bb / (c * cb**2)
    )
    return (
        -F(1, 2) * T(Lb(P)) / (c**2 * cb**2)
        + L(Lb(Pb)) * bb / (c**2 * cb**3)
        - F(1, 2) * L(L(Pb)) * b / (c**3 * cb**2)
        - F(1, 2) * Lb(L(Pb)) * bb / (c**2 * cb**3)
        + Lb(L(P)) * b / (c**3 * cb**2)
        - I * L(P) * b**2 / (c**4 * cb**2)
        + I * Lb(Pb) * bb**2 / (c**2 * cb**4)
        + s_coefficient * (x.s + x.sb)
        + (3 * bb / (c * cb) - I * P / c) * x.r
        + (3 * b / (c * cb) + I * Pb / cb) * x.rb
    )


def compute_normalizations(gp, ctx=None):
    """
    r, W1 and the gamma coefficients V1, V2, V3 once sb is bound.

    V1 is read off the normalized gamma0 on the final coframe; the
    transcribed V1 display is only audited.
    """
    # forms.stages builds its coframes from this module
    from forms.stages import gamma_coefficient

    if not gp.is_bound('sb'):
        raise UnboundSbar("bind sb before computing the second normalization")
    rhs = r_rhs(gp, ctx)
    bound = gp if gp.is_bound('r') else bind_r(gp, ctx)
    x = formula_scope(ctx, bound)
    return {
        'r_rhs': rhs,
        'W1': compute_W1_general(bound, ctx),
        'V1': gamma_coefficient('rho', ctx),
        'V2': displays.V2_display(x),
        'V3': displays.V3_display(x),
    }


def normalized_params(ctx=None):
    """
    GroupParams with sb, r and rb eliminated.
    """
    return bind_r(bind_sbar(GroupParams(), ctx), ctx)


def compute_J(gp=GroupParams(), ctx=None, mutation=None):
    return displays.J_formula(formula_scope(ctx, gp), mutation)


def compute_Tfrak(gp=GroupParams(), ctx=None, mutation=None):
    x = formula_scope(ctx, gp)
    Jb = conjugate(compute_J(gp, ctx, mutation))
    return (x.Lb(Jb) - x.Pb * Jb) / x.cb - I * x.b / (x.c * x.cb) * Jb


def compute_Deltas(ctx=None):
    x = formula_scope(ctx)
    return {
        'Delta1': displays.Delta1_formula(x),
        'Delta4': displays.Delta4_formula(x),
    }


@dataclass
class InvariantBundle:
    A: object
    ell: object
    P: object
    U1: object
    U2: object
    V1_first: object
    V2_first: object
    V3_first: object
    W: object
    sbar_rhs: object
    r_rhs: object
    W1: object
    V1: object
    V2: object
    V3: object
    J: object
    Tfrak: object
    Delta1: object
    Delta4: object
    provenance: dict = field(default_factory=dict)


PROVENANCE = {
    'A': 'graph tangency coefficient',
    'ell': 'Levi factor',
    'P': 'bracket coefficient [T, L] = -P T',
    'U1': 'lifted d rho torsion',
    'U2': 'normalized to i by a = c cb',
    'W': 'prolonged d alpha torsion',
    'sbar_rhs': 'normalizes W to zero',
    'r_rhs': 'normalizes W2 to zero',
    'W1': 'rho part of conj(delta) - delta after both normalizations',
    'V1': 'rho coefficient of gamma0 after both normalizations',
    'V2': 'transcribed gamma coefficient, s^2 term read as a summand',
    'V3': 'transcribed gamma coefficient, renamed J',
    'J': 'essential invariant',
    'Tfrak': 'rho^zeta coefficient of d delta',
    'Delta1': 'Cartan curvature',
    'Delta4': 'Cartan curvature',
}


def compute_bundle(ctx=None, gp=None):
    ctx = _context(ctx)
    gp = GroupParams() if gp is None else gp
    first = compute_first_torsions(gp, ctx)
    sbar_bound = gp if gp.is_bound('sb') else bind_sbar(gp, ctx)
    normal = compute_normalizations(sbar_bound, ctx)
    deltas = compute_Deltas(ctx)
    logger.debug(f"assembled invariant bundle (rigid={ctx.rigid})")
    return InvariantBundle(
        A=compute_A(ctx),
        ell=compute_ell(ctx),
        P=compute_P(ctx),
        U1=first['U1'],
        U2=first['U2'],
        V1_first=first['V1'],
        V2_first=first['V2'],
        V3_first=first['V3'],
        W=compute_W(gp, ctx),
        sbar_rhs=sbar_rhs(gp, ctx),
        r_rhs=normal['r_rhs'],
        W1=normal['W1'],
        V1=normal['V1'],
        V2=normal['V2'],
        V3=normal['V3'],
        J=compute_J(gp, ctx),
        Tfrak=compute_Tfrak(gp, ctx),
        Delta1=deltas['Delta1'],
        Delta4=deltas['Delta4'],
        provenance=dict(PROVENANCE),
    )


INVARIANTS = ('A', 'ell', 'P', 'U', 'V-first', 'W', 'sbar', 'r', 'W1', 'V',
              'J', 'Tfrak', 'Delta1', 'Delta4')


def select_invariant(name, ctx=None, gp=None, mutation=None):
    """
    Named expressions for one invariant selector.
    """
    ctx = _context(ctx)
    gp = GroupParams() if gp is None else gp
    if name == 'A':
        return {'A': compute_A(ctx)}
    if name == 'ell':
        return {'ell': compute_ell(ctx)}
    if name == 'P':
        return {'P': compute_P(ctx)}
    if name == 'U':
        first = compute_first_torsions(gp, ctx)
        return {'U1': first['U1'], 'U2': first['U2']}
    if name == 'V-first':
        first = compute_first_torsions(gp, ctx)
        return {key: first[key] for key in ('V1', 'V2', 'V3')}
    if name == 'W':
        return {'W': compute_W(gp, ctx)}
    if name == 'sbar':
        return {'sbar': sbar_rhs(gp, ctx)}
    if name == 'r':
        return {'r': r_rhs(gp, ctx)}
    normal = compute_normalizations(bind_sbar(gp, ctx), ctx) if name in ('W1', 'V') else None
    if name == 'W1':
        return {'W1': normal['W1']}
    if name == 'V':
        return {key: normal[key] for key in ('V1', 'V2', 'V3')}
    if name == 'J':
        return {'J': compute_J(gp, ctx, mutation)}
    if name == 'Tfrak':
        return {'Tfrak': compute_Tfrak(gp, ctx, mutation)}
    if name in ('Delta1', 'Delta4'):
        return {name: compute_Deltas(ctx)[name]}
    raise ValueError(f"unknown invariant {name!r}")
