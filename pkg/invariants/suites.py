"""
Identity suites: each returns a list of Checks built from zero tests of
residual expressions, forms or vector fields.
"""
import logging
from fractions import Fraction as F

from forms.stages import STAGES, gamma_coefficient
from forms.structure import extract_Tfrak_from_ddelta, verify_rho_varrho, verify_stage
from jets.calculus import specialize_phi
from jets.context import JetContext
from jets.fields import lie_bracket
from symbolic import scalars
from symbolic.canonical import expand_canonical
from symbolic.conf import engine_setting
from symbolic.exceptions import ExpansionOverflow
from symbolic.expr import I, conjugate, const, substitute
from symbolic.parser import parse_phi
from symbolic.variables import base_var, group_var
from symbolic.zerotest import is_identically_zero

from . import displays
from .decorators import log_check
from .group import GroupParams
from .numeric import agree, exact_at, numeric_at
from .pipeline import (bind_r, bind_sbar, compute_Deltas, compute_ell, compute_J, compute_P,
                       compute_W, compute_W1_general, compute_W2, formula_scope, sbar_rhs)
from .reports import DISPLAY, IDENTITY, OBSERVATION, Check

logger = logging.getLogger(__name__)

SUITES = ('reality', 'brackets', 'jacobi4', 'w2vanish', 'w1v2', 'theorem',
          'rigid-report', 'structure', 'model', 'all')

MODEL_PHI = 'z*zb'
NONDEGENERATE_PHI = 'z*zb + z^2*zb^2'
FIELD_COMPONENTS = ('D_z', 'D_zb', 'D_u')


class IdentitySuites:
    """
    Runs the named suites with one seed, trial count, node budget and
    optional coefficient mutation.
    """

    def __init__(self, ctx=None, seed=None, trials=None, budget=None, mutation=None, mode='auto'):
        self.ctx = JetContext.from_settings() if ctx is None else ctx
        self.seed = engine_setting('SEED') if seed is None else seed
        self.trials = engine_setting('TRIALS') if trials is None else trials
        self.budget = budget
        self.mutation = mutation
        self.mode = mode
        self.gp = GroupParams()

    # helpers ------------------------------------------------------------
    def verdict(self, e):
        """
        Zero test; a canonical nonzero verdict is re-sampled for a witness.
        """
        verdict = is_identically_zero(e, mode=self.mode, trials=self.trials, seed=self.seed,
                                      budget=self.budget)
        if not verdict.zero and verdict.witness is None and verdict.mode == 'canonical':
            sampled = is_identically_zero(e, mode='probabilistic', trials=self.trials, seed=self.seed)
            if not sampled.zero:
                sampled.work += verdict.work
                return sampled
        return verdict

    def zero(self, name, e, kind=IDENTITY):
        return Check.from_verdict(name, self.verdict(e), kind)

    def zero_field(self, name, X):
        """
        A vector field vanishes when each of its components does.
        """
        work = 0
        for label, component in zip(FIELD_COMPONENTS, X.components):
            verdict = self.verdict(component)
            work += verdict.work
            if not verdict.zero:
                return Check.from_verdict(name, verdict, position=label)
        return Check.from_outcome(name, True, mode=self.mode, trials=self.trials, work=work)

    @property
    def sbar_bound(self):
        return bind_sbar(self.gp, self.ctx)

    @property
    def normalized(self):
        return bind_r(self.sbar_bound, self.ctx)

    def run(self, name):
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        names = SUITES[:-1] if name == 'all' else (name,)
        checks = []
        for suite in names:
            logger.info(f"running suite {suite}")
            checks.extend(getattr(self, suite.replace('-', '_'))())
        return checks

    # suites ---------------------------------------------------------------
    @log_check
    def reality(self):
        ctx, gp = self.ctx, self.gp
        x = formula_scope(ctx, gp)
        ell = compute_ell(ctx)
        W = compute_W(gp, ctx)
        deltas = compute_Deltas(ctx)
        sbar = self.sbar_bound
        normalized = self.normalized
        W1 = compute_W1_general(normalized, ctx)
        return [
            self.zero('ell-real', ell - conjugate(ell)),
            self.zero('LP-reality', x.L(x.Pb) - x.Lb(x.P)),
            self.zero('W-real', W - conjugate(W)),
            self.zero('Delta1-real', deltas['Delta1'] - conjugate(deltas['Delta1'])),
            self.zero('Delta4-real', deltas['Delta4'] - conjugate(deltas['Delta4'])),
            self.zero('sbar-involution', sbar.apply(conjugate(sbar_rhs(gp, ctx))) - gp.s),
            self.zero('W1-real', normalized.apply(conjugate(W1)) - W1),
        ]

    @log_check
    def brackets(self):
        x = formula_scope(self.ctx, self.gp)
        frame = x.frame
        L, Lbar, T = frame.L, frame.Lbar, frame.T
        return [
            self.zero_field('[L,Lbar]+iT', lie_bracket(L, Lbar, self.ctx) + T.scale(I)),
            self.zero_field('[T,L]+PT', lie_bracket(T, L, self.ctx) + T.scale(x.P)),
            self.zero_field('[T,Lbar]+PbT', lie_bracket(T, Lbar, self.ctx) + T.scale(x.Pb)),
        ]

    @log_check
    def jacobi4(self):
        x = formula_scope(self.ctx, self.gp)
        frame = x.frame
        H1 = frame.L + frame.Lbar
        H2 = (frame.L - frame.Lbar).scale(I)
        H12 = lie_bracket(H1, H2, self.ctx)
        checks = [
            self.zero_field('hypothesis:H1', lie_bracket(H1, H12, self.ctx) - H12.scale(x.Phi1)),
            self.zero_field('hypothesis:H2', lie_bracket(H2, H12, self.ctx) - H12.scale(x.Phi2)),
        ]
        for label, residual in displays.iterated_identities(x).items():
            checks.append(self.zero(f"identity-{label}", residual))
        return checks

    @log_check
    def w2vanish(self):
        ctx = self.ctx
        sbar, normalized = self.sbar_bound, self.normalized
        x = formula_scope(ctx, normalized)
        return [
            self.zero('W-normalized', compute_W(sbar, ctx)),
            self.zero('W2-normalized', compute_W2(normalized, ctx)),
            self.zero('display:W1', displays.W1_display(x) - compute_W1_general(normalized, ctx),
                      DISPLAY),
        ]

    @log_check
    def w1v2(self):
        ctx, normalized = self.ctx, self.normalized
        x = formula_scope(ctx, normalized)
        V2 = displays.V2_display(x)
        W1 = compute_W1_general(normalized, ctx)
        return [
            self.zero('W1-V2-compact', displays.W1_V2_compact(x, self.mutation)),
            self.zero('display:W1-V2', normalized.apply(conjugate(V2)) - I * W1 - V2, DISPLAY),
            # gamma0 is transcribed, so a mismatch is flagged rather than failed
            self.zero('J-V3',
                      compute_J(self.gp, ctx, self.mutation) - gamma_coefficient('zetabar', ctx),
                      DISPLAY),
        ]

    @log_check
    def theorem(self):
        ctx, gp = self.ctx, self.gp
        J = compute_J(gp, ctx, self.mutation)
        deltas = compute_Deltas(ctx)
        orders = [v.jet.order for v in J.free_vars() if v.kind == 'jet']
        top = max(orders, default=0)
        return [
            self.zero('J-Delta', J * gp.c * gp.cb**3 / 4 - (deltas['Delta1'] + I * deltas['Delta4'])),
            Check.from_outcome('J-jet-order', top <= 6, mode='structural',
                               detail={'max_order': top}),
        ]

    @log_check
    def rigid_report(self):
        ctx = JetContext(max_order=self.ctx.max_order, rigid=True)
        sliced = rigid_J(ctx.max_order, self.mutation)
        checks = []
        try:
            normal = expand_canonical(sliced, self.budget)
        except ExpansionOverflow as exc:
            checks.append(Check.from_outcome('rigid-expansion', False, OBSERVATION,
                                             mode='canonical', detail={'error': str(exc)}))
        else:
            checks.append(Check.from_outcome(
                'rigid-expansion', True, OBSERVATION, mode='canonical', work=normal.work,
                detail={'numerator_monomials': normal.monomial_count,
                        'denominator_monomials': len(normal.denominator)},
            ))
            checks.append(Check.from_outcome('rigid-J-nonzero', not normal.is_zero, mode='canonical'))
        model = specialize_phi(sliced, parse_phi(MODEL_PHI), ctx)
        checks.append(self.zero('rigid-J-model', model))
        return checks

    @log_check
    def structure(self):
        checks = []
        for stage in STAGES:
            checks.extend(verify_stage(stage, self.ctx, self.seed, self.trials, self.mutation))
        checks.extend(verify_rho_varrho(self.ctx, self.seed, self.trials))
        checks.extend(extract_Tfrak_from_ddelta(self.ctx, self.seed, self.trials, self.mutation))
        return checks

    @log_check
    def model(self):
        ctx = self.ctx
        phi = parse_phi(MODEL_PHI)
        J = compute_J(self.gp, ctx, self.mutation)
        checks = [
            self.zero('model-P', specialize_phi(compute_P(ctx), phi, ctx)),
            self.zero('model-ell', specialize_phi(compute_ell(ctx), phi, ctx) - 2),
            self.zero('model-J', specialize_phi(J, phi, ctx)),
        ]
        checks.append(self.nondegenerate(J))
        return checks

    def nondegenerate(self, J):
        """
        J of a non-spherical graph is nonzero at one point, exactly and in
        double precision.
        """
        ctx = self.ctx
        phi = parse_phi(NONDEGENERATE_PHI)
        specialized = specialize_phi(J, phi, ctx)
        half = scalars.gaussian(F(1, 2))
        point = {base_var('z'): half, base_var('zb'): half, base_var('u'): scalars.ZERO,
                 group_var('b'): scalars.ZERO, group_var('c'): scalars.ONE,
                 group_var('cb'): scalars.ONE}
        point = {v: value for v, value in point.items() if v in specialized.free_vars()}
        exact = exact_at(specialized, point)
        numeric = numeric_at(specialized, point)
        nonzero = bool(exact)
        return Check.from_outcome(
            'nondegenerate-J', nonzero and agree(exact, numeric), mode='exact', trials=1,
            detail={'exact_nonzero': nonzero, 'numeric': f"{numeric.real:.12g}{numeric.imag:+.12g}i"},
        )


def run_identity_suite(name, ctx=None, seed=None, trials=None, budget=None, mutation=None):
    """
    Run one suite (or 'all') and return its Checks.
    """
    return IdentitySuites(ctx, seed, trials, budget, mutation).run(name)


def rigid_J(max_order=None, mutation=None):
    """
    J on rigid jets at the identity slice b = 0, c = cb = 1.
    """
    ctx = JetContext.from_settings(rigid=True, max_order=max_order)
    J = compute_J(GroupParams(), ctx, mutation)
    return substitute(J, {group_var('b'): const(0), group_var('c'): const(1), group_var('cb'): const(1)})
