"""
The coframes of the equivalence problem, stage by stage.

initial    (z, zb, u)                        rho0, zeta0, zetabar0
lifted     + (b, bb, c, cb)                  rho, zeta, zetabar, alpha, beta and conjugates
prolonged  + (s, sb, r, rb)                  absorbed alpha, beta plus ds, dsb, dr, drb
final      (z, zb, u, b, bb, c, cb, s)       e-structure with delta; sb, r, rb bound

Each stage keeps its coframe as coordinate-basis Forms together with the
structure equations it is expected to satisfy, written as lists of
(coefficient, left, right) terms meaning coefficient * left ^ right.
"""
import logging
from functools import lru_cache

from invariants import displays
from invariants.group import GroupParams
from invariants.pipeline import (compute_A, compute_ell, compute_first_torsions, compute_J,
                                 compute_P, compute_Tfrak, compute_W, formula_scope,
                                 normalized_params)
from jets.context import JetContext
from symbolic.exceptions import DegreeOverflow
from symbolic.expr import I, ONE, ZERO, add, conjugate, div, mul, neg, var
from symbolic.variables import BASE_NAMES, base_var, group_var

from .algebra import (Basis, Form, conjugate_form, contract, differential, exterior_d,
                      substitute_form, wedge)
from .linalg import inverse_expr_matrix

logger = logging.getLogger(__name__)

STAGES = ('initial', 'lifted', 'prolonged', 'final')

LIFTED_NAMES = ('rho', 'zeta', 'zetabar', 'alpha', 'beta', 'alphabar', 'betabar')


def _variable(name):
    return base_var(name) if name in BASE_NAMES else group_var(name)


class CoframeStage:

    def __init__(self, name, ctx, gp, coordinates):
        self.name = name
        self.ctx = ctx
        self.gp = gp
        self.basis = Basis.coordinates(_variable(v) for v in coordinates)
        self.coframe = {}
        self.auxiliary = {}
        self.equations = {}
        self.torsion = {}

    def __repr__(self):
        return f"CoframeStage({self.name}, {len(self.coframe)} forms)"

    # coordinates and their differentials --------------------------------
    def coordinate(self, name):
        return var(_variable(name))

    def param(self, name):
        """
        A group parameter: its binding when eliminated, else the coordinate.
        """
        if self.gp.is_bound(name):
            return self.gp.value(name)
        return self.coordinate(name)

    def d(self, name):
        if self.gp.is_bound(name):
            return differential(self.gp.value(name), self.basis, self.ctx)
        return Form.basis_form(self.basis, f"d{name}")

    def conj(self, w):
        """
        Conjugate of a coordinate form. A conjugate partner that is bound
        enters through its binding.
        """
        variables = self.basis.variables

        def conjugate_differential(index):
            return self.d(variables[index].conjugate().name)

        image = conjugate_form(w, conjugate_differential)
        return substitute_form(image, self.gp.variable_bindings())

    # coframe --------------------------------------------------------------
    @property
    def lifted_basis(self):
        return Basis.lifted(tuple(self.coframe))

    def form(self, name):
        if name in self.coframe:
            return self.coframe[name]
        return self.auxiliary[name]

    def combination(self, coefficients, start=None):
        """
        start + sum of coefficient * form over a {name: coefficient} mapping.
        """
        result = Form.zero(1, self.basis) if start is None else start
        for name, coefficient in coefficients.items():
            result = result + self.form(name).scale(coefficient)
        return result

    def rhs(self, terms, degree=2):
        result = Form.zero(degree, self.basis)
        for coefficient, left, right in terms:
            result = result + wedge(self.form(left), self.form(right)).scale(coefficient)
        return result

    def residual(self, name, terms=None):
        """
        d(theta) minus the stated right-hand side, in coordinates.
        """
        terms = self.equations[name] if terms is None else terms
        return exterior_d(self.form(name), self.ctx) - self.rhs(terms)

    def matrix(self, names=None):
        """
        Rows are the coframe elements, columns the coordinate differentials.
        """
        names = tuple(self.coframe) if names is None else names
        return [[self.form(name).coefficient(k) for k in range(self.basis.size)]
                for name in names]

    @property
    def exclusions(self):
        """
        Expressions that must not vanish at a sample point.
        """
        ell = compute_ell(self.ctx)
        if self.name == 'initial':
            return [ell]
        return [ell, self.coordinate('c'), self.coordinate('cb')]


def _context(ctx):
    return JetContext.from_settings() if ctx is None else ctx


def _initial_forms(stage):
    A = compute_A(stage.ctx)
    ell = compute_ell(stage.ctx)
    rho0 = (stage.d('u') - stage.d('z').scale(A) - stage.d('zb').scale(conjugate(A))).scale(div(ONE, ell))
    return rho0, stage.d('z'), stage.d('zb')


def _lifted_forms(stage):
    rho0, zeta0, _ = _initial_forms(stage)
    b, c, cb = stage.coordinate('b'), stage.coordinate('c'), stage.coordinate('cb')
    rho = rho0.scale(c * cb)
    zeta = rho0.scale(b) + zeta0.scale(c)
    alpha = stage.d('c').scale(ONE / c)
    beta = stage.d('b').scale(ONE / (c * cb)) - stage.d('c').scale(b / (c**2 * cb))
    return rho, zeta, alpha, beta


def _absorbed_forms(stage):
    """
    rho, zeta, alpha0 and beta0: the lifted forms with the first-loop
    torsion absorbed.
    """
    rho, zeta, alpha, beta = _lifted_forms(stage)
    zetabar = stage.conj(zeta)
    torsion = compute_first_torsions(GroupParams(), stage.ctx)
    P = compute_P(stage.ctx)
    b, bb = stage.coordinate('b'), stage.coordinate('bb')
    c, cb = stage.coordinate('c'), stage.coordinate('cb')
    alpha0 = alpha - zeta.scale((P * cb + 2 * I * bb) / (c * cb)) - zetabar.scale(I * b / (c * cb))
    beta0 = beta - zeta.scale(torsion['V1']) - zetabar.scale(torsion['V2'])
    return rho, zeta, zetabar, alpha0, beta0


@lru_cache(maxsize=None)
def _initial_stage(ctx):
    stage = CoframeStage('initial', ctx, GroupParams(), BASE_NAMES)
    rho0, zeta0, zetabar0 = _initial_forms(stage)
    stage.coframe.update(rho=rho0, zeta=zeta0, zetabar=zetabar0)
    P = compute_P(ctx)
    Pb = conjugate(P)
    stage.torsion.update(P=P)
    stage.equations.update(
        rho=[(P, 'rho', 'zeta'), (Pb, 'rho', 'zetabar'), (I, 'zeta', 'zetabar')],
        zeta=[],
        zetabar=[],
    )
    return stage


@lru_cache(maxsize=None)
def _lifted_stage(ctx):
    stage = CoframeStage('lifted', ctx, GroupParams(), BASE_NAMES + ('b', 'bb', 'c', 'cb'))
    rho, zeta, alpha, beta = _lifted_forms(stage)
    stage.coframe.update(rho=rho, zeta=zeta, zetabar=stage.conj(zeta), alpha=alpha, beta=beta,
                         alphabar=stage.conj(alpha), betabar=stage.conj(beta))
    t = compute_first_torsions(GroupParams(), ctx)
    stage.torsion.update(t)
    U1b, V1b, V2b, V3b = (conjugate(t[key]) for key in ('U1', 'V1', 'V2', 'V3'))
    stage.equations.update(
        rho=[(1, 'alpha', 'rho'), (1, 'alphabar', 'rho'), (t['U1'], 'rho', 'zeta'),
             (U1b, 'rho', 'zetabar'), (t['U2'], 'zeta', 'zetabar')],
        zeta=[(1, 'beta', 'rho'), (1, 'alpha', 'zeta'), (t['V1'], 'rho', 'zeta'),
              (t['V2'], 'rho', 'zetabar'), (t['V3'], 'zeta', 'zetabar')],
        zetabar=[(1, 'betabar', 'rho'), (1, 'alphabar', 'zetabar'), (V1b, 'rho', 'zetabar'),
                 (V2b, 'rho', 'zeta'), (V3b, 'zetabar', 'zeta')],
        alpha=[],
        beta=[(1, 'beta', 'alphabar')],
        alphabar=[],
        betabar=[(1, 'betabar', 'alpha')],
    )
    return stage


@lru_cache(maxsize=None)
def _prolonged_stage(ctx):
    stage = CoframeStage('prolonged', ctx, GroupParams(),
                         BASE_NAMES + ('b', 'bb', 'c', 'cb', 's', 'sb', 'r', 'rb'))
    rho, zeta, zetabar, alpha0, beta0 = _absorbed_forms(stage)
    s, r = stage.coordinate('s'), stage.coordinate('r')
    alpha = alpha0 + rho.scale(s)
    beta = beta0 + rho.scale(r) + zeta.scale(s)
    stage.coframe.update(rho=rho, zeta=zeta, zetabar=zetabar, alpha=alpha, beta=beta,
                         alphabar=stage.conj(alpha), betabar=stage.conj(beta),
                         ds=stage.d('s'), dsb=stage.d('sb'), dr=stage.d('r'), drb=stage.d('rb'))
    stage.equations.update(
        rho=[(1, 'alpha', 'rho'), (1, 'alphabar', 'rho'), (I, 'zeta', 'zetabar')],
        zeta=[(1, 'beta', 'rho'), (1, 'alpha', 'zeta')],
        zetabar=[(1, 'betabar', 'rho'), (1, 'alphabar', 'zetabar')],
    )
    x = formula_scope(ctx, GroupParams())
    stage.auxiliary['delta0'] = stage.combination(displays.delta0_coefficients(x), start=stage.d('s'))
    stage.auxiliary['gamma0'] = stage.combination(displays.gamma0_coefficients(x), start=stage.d('r'))
    stage.torsion['W'] = compute_W(GroupParams(), ctx)
    return stage


def derive_delta(stage, J):
    """
    The unique delta with d alpha = delta ^ rho + 2i zeta ^ betabar + i zetabar ^ beta
    and d beta = delta ^ zeta + beta ^ alphabar + J zetabar ^ rho.

    The representative without a du component is read off d alpha; the
    remaining multiple of rho is fixed by the dz ^ du part of d beta.
    """
    rho, zeta, zetabar = stage.form('rho'), stage.form('zeta'), stage.form('zetabar')
    alpha, beta = stage.form('alpha'), stage.form('beta')
    alphat, betat = stage.form('alphabar'), stage.form('betabar')
    u = stage.basis.index_of_variable(base_var('u'))
    z = stage.basis.index_of_variable(base_var('z'))

    omega = (exterior_d(alpha, stage.ctx)
             - wedge(zeta, betat).scale(2 * I)
             - wedge(zetabar, beta).scale(I))
    rho_u = rho.coefficient(u)
    partial_delta = Form.one_form(stage.basis, {
        k: div(omega.coefficient(k, u), rho_u) for k in range(stage.basis.size) if k != u
    })

    psi = (exterior_d(beta, stage.ctx)
           - wedge(partial_delta, zeta)
           - wedge(beta, alphat)
           - wedge(zetabar, rho).scale(J))
    shift = div(psi.coefficient(z, u), wedge(rho, zeta).coefficient(z, u))
    return partial_delta + rho.scale(shift)


BASE_FORMS = ('rho', 'zeta', 'zetabar')

# each lifted form introduces one fiber differential the earlier ones lack
FIBER_SOLVE_ORDER = (('alpha', 'c'), ('alphabar', 'cb'), ('beta', 'b'), ('betabar', 'bb'))


def dual_field(stage, name):
    """
    Components, in the stage coordinates, of the vector field on which
    the base form `name` is 1 while the other base forms, alpha, beta,
    their conjugates and the differentials of the remaining fiber
    coordinates (ds, dsb, dr, drb) vanish.

    The base forms only involve dz, dzb, du, so the base part is the
    inverse of a 3x3 block; each lifted form then fixes its own fiber
    component.
    """
    if name not in BASE_FORMS:
        raise ValueError(f"no dual field for {name!r}")
    base = [stage.basis.index_of_variable(base_var(v)) for v in BASE_NAMES]
    N = inverse_expr_matrix([[stage.form(form).coefficient(k) for k in base]
                             for form in BASE_FORMS])
    column = BASE_FORMS.index(name)
    components = [ZERO] * stage.basis.size
    for row, k in enumerate(base):
        components[k] = N[row][column]
    for form_name, coordinate in FIBER_SOLVE_ORDER:
        if form_name not in stage.coframe:
            continue
        form = stage.form(form_name)
        k = stage.basis.index_of_variable(_variable(coordinate))
        components[k] = neg(div(contract(form, components), form.coefficient(k)))
    return tuple(components)


def gamma_coefficient(name, ctx=None):
    """
    Coefficient of the normalized gamma0 along rho, zeta or zetabar on
    the final stage.

    gamma0 is dr plus multiples of zeta, zetabar, alpha, beta and their
    conjugates, with r bound; pairing with the dual field leaves the
    named coefficient and dr evaluated on the field.
    """
    stage = build_stage('final', ctx)
    coefficients = displays.gamma0_coefficients(formula_scope(stage.ctx, stage.gp))
    return add(coefficients.get(name, ZERO), contract(stage.d('r'), dual_field(stage, name)))


@lru_cache(maxsize=None)
def _final_stage(ctx, mutation):
    gp = normalized_params(ctx)
    stage = CoframeStage('final', ctx, gp, BASE_NAMES + ('b', 'bb', 'c', 'cb', 's'))
    rho, zeta, zetabar, alpha0, beta0 = _absorbed_forms(stage)
    s = stage.coordinate('s')
    alpha = alpha0 + rho.scale(s)
    beta = beta0 + rho.scale(stage.param('r')) + zeta.scale(s)
    stage.coframe.update(rho=rho, zeta=zeta, zetabar=zetabar, alpha=alpha, beta=beta,
                         alphabar=stage.conj(alpha), betabar=stage.conj(beta))

    J = compute_J(GroupParams(), ctx, mutation)
    Tfrak = compute_Tfrak(GroupParams(), ctx, mutation)
    Jt, Tt = conjugate(J), conjugate(Tfrak)
    stage.torsion.update(J=J, Jbar=Jt, Tfrak=Tfrak, Tfrakbar=Tt)
    stage.coframe['delta'] = derive_delta(stage, J)
    logger.debug(f"derived delta on the final stage (rigid={ctx.rigid}, mutation={mutation})")

    stage.equations.update(
        rho=[(1, 'alpha', 'rho'), (1, 'alphabar', 'rho'), (I, 'zeta', 'zetabar')],
        zeta=[(1, 'beta', 'rho'), (1, 'alpha', 'zeta')],
        zetabar=[(1, 'betabar', 'rho'), (1, 'alphabar', 'zetabar')],
        alpha=[(1, 'delta', 'rho'), (2 * I, 'zeta', 'betabar'), (I, 'zetabar', 'beta')],
        beta=[(1, 'delta', 'zeta'), (1, 'beta', 'alphabar'), (J, 'zetabar', 'rho')],
        alphabar=[(1, 'delta', 'rho'), (-2 * I, 'zetabar', 'beta'), (-I, 'zeta', 'betabar')],
        betabar=[(1, 'delta', 'zetabar'), (1, 'betabar', 'alpha'), (Jt, 'zeta', 'rho')],
        delta=[(1, 'delta', 'alpha'), (1, 'delta', 'alphabar'), (I, 'beta', 'betabar'),
               (Tfrak, 'rho', 'zeta'), (Tt, 'rho', 'zetabar')],
    )

    x = formula_scope(ctx, gp)
    stage.auxiliary['ds'] = stage.d('s')
    stage.auxiliary['delta_display'] = stage.combination({
        'rho': displays.delta_rho_display(x),
        'zeta': displays.delta_zeta_display(x),
        'zetabar': displays.delta_zetabar_display(x),
        'alpha': s,
        'beta': -(x.P / x.c + 2 * I * x.bb / (x.c * x.cb)),
        'alphabar': s,
        'betabar': -I * x.b / (x.c * x.cb),
    }, start=stage.d('s'))
    stage.auxiliary['delta0'] = stage.combination(displays.delta0_coefficients(x), start=stage.d('s'))
    stage.auxiliary['gamma0'] = stage.combination(displays.gamma0_coefficients(x), start=stage.d('r'))
    return stage


def build_stage(name, ctx=None, mutation=None):
    ctx = _context(ctx)
    if name == 'initial':
        return _initial_stage(ctx)
    if name == 'lifted':
        return _lifted_stage(ctx)
    if name == 'prolonged':
        return _prolonged_stage(ctx)
    if name == 'final':
        return _final_stage(ctx, mutation)
    raise ValueError(f"unknown stage {name!r}")


def _lift_matrix(stage, names=None):
    return inverse_expr_matrix(stage.matrix(names))


def to_lifted_basis(w, stage, names=None):
    """
    Re-express a coordinate form of degree 1 or 2 over the stage coframe
    (or over the coframe-like list `names`).
    """
    names = tuple(stage.coframe) if names is None else tuple(names)
    basis = Basis.lifted(names)
    if w.degree == 0:
        return Form(0, dict(w.terms), basis)
    if w.degree > 2:
        raise DegreeOverflow("only 1-forms and 2-forms are rewritten")
    N = _lift_matrix(stage, names)
    n = len(names)
    if w.degree == 1:
        return Form.one_form(basis, {
            i: add(*(mul(w.coefficient(k), N[k][i]) for k in range(n))) for i in range(n)
        })
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            entries = []
            for (k, l), value in w.terms.items():
                entries.append(mul(value, N[k][i], N[l][j]))
                entries.append(neg(mul(value, N[l][i], N[k][j])))
            terms[(i, j)] = add(*entries) if entries else ZERO
    return Form(2, terms, basis)


def to_coordinate_basis(w, stage):
    """
    Replace every lifted basis element by its coordinate expression.
    """
    result = Form.zero(w.degree, stage.basis)
    names = w.basis.names
    for key, value in w.terms.items():
        image = Form.function(value, stage.basis)
        for index in key:
            image = wedge(image, stage.form(names[index]))
        result = result + image
    return result


def lifted_form(basis, coefficients, degree):
    """
    A lifted-basis Form from {(name, ...): coefficient}.
    """
    result = Form.zero(degree, basis)
    for key, value in coefficients.items():
        piece = Form.function(value, basis)
        for name in key:
            piece = wedge(piece, Form.basis_form(basis, name))
        result = result + piece
    return result
