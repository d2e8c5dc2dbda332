"""
Mechanical verification of structure equations.

Residual forms are built in coordinates. At each sample point the stage
matrix is inverted exactly and the residual is rewritten over the
coframe, so failures are reported at a coframe position such as
rho^zeta, together with the point.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Callable, Optional

import numpy as np

from invariants import displays
from invariants.pipeline import compute_A, compute_ell, compute_W, compute_W1_general, formula_scope
from invariants.reports import DISPLAY, IDENTITY, Check
from jets.sampling import random_real_assignment
from symbolic import scalars
from symbolic.conf import engine_setting
from symbolic.evaluation import Evaluator
from symbolic.exceptions import PoleAtPoint, SingularBasis, SingularLocusExhausted
from symbolic.expr import I, ONE, ZERO, conjugate, const, free_vars, var
from symbolic.sampling import format_assignment
from symbolic.variables import jet_var
from symbolic.zerotest import is_identically_zero

from .algebra import Basis, Form, contract, differential, exterior_d, wedge
from .linalg import as_object_matrix, determinant, inverse_matrix
from .stages import BASE_FORMS, LIFTED_NAMES, build_stage, gamma_coefficient, lifted_form

logger = logging.getLogger(__name__)

WITH_DS = LIFTED_NAMES + ('ds',)


@dataclass
class Audit:
    """
    One residual form to be shown zero over a coframe.

    names selects the coframe (default: the stage coframe); select keeps
    only some positions; expected gives values the selected positions
    must take instead of zero. Forms of degree 3 are tested on their
    coordinate coefficients.
    """
    name: str
    form: Form
    kind: str = IDENTITY
    names: Optional[tuple] = None
    select: Optional[Callable] = None
    expected: dict = field(default_factory=dict)


def _rng(seed, rng):
    if rng is not None:
        return rng
    return np.random.default_rng(engine_setting('SEED') if seed is None else seed)


def _regular_point(stage, rng, variables, compute):
    """
    Draw points until compute(evaluator) succeeds without meeting a pole
    or a singular coframe. Returns (point, result, work).
    """
    work = 0
    for attempt in range(engine_setting('RETRY_BUDGET')):
        point = random_real_assignment(rng, stage.ctx, stage.exclusions, variables=variables)
        evaluator = Evaluator(point)
        try:
            result = compute(evaluator)
        except (PoleAtPoint, SingularBasis):
            logger.debug(f"{stage.name}: redrawing after singular point (attempt {attempt + 1})")
            continue
        finally:
            work += len(evaluator.cache)
        return point, result, work
    raise SingularLocusExhausted(f"{stage.name}: no regular point in the retry budget")


def _inverse_at(evaluator, rows):
    return inverse_matrix(as_object_matrix([evaluator.values(row) for row in rows]))


def lifted_values(w, evaluator, N, names):
    """
    {position names: value} of a coordinate form rewritten over the
    coframe with inverse matrix N, at the evaluator's point.
    """
    n = len(names)
    if w.degree == 0:
        return {(): evaluator.value(w.terms.get((), ZERO))}
    if w.degree == 1:
        g = np.full(n, scalars.ZERO, dtype=object)
        for (k,), value in w.terms.items():
            g[k] = evaluator.value(value)
        lifted = g.dot(N)
        return {(names[i],): lifted[i] for i in range(n)}
    W = np.full((n, n), scalars.ZERO, dtype=object)
    for (k, l), value in w.terms.items():
        entry = evaluator.value(value)
        W[k, l] = entry
        W[l, k] = -entry
    V = N.T.dot(W).dot(N)
    return {(names[i], names[j]): V[i, j] for i in range(n) for j in range(i + 1, n)}


def _coordinate_values(w, evaluator):
    names = w.basis.names
    return {tuple(names[i] for i in key): evaluator.value(value) for key, value in w.terms.items()}


def _audit_values(stage, audit, evaluator, inverses):
    if audit.form.degree > 2:
        values = _coordinate_values(audit.form, evaluator)
    else:
        names = audit.names or tuple(stage.coframe)
        values = lifted_values(audit.form, evaluator, inverses[names], names)
    entries = []
    for key, value in values.items():
        if audit.select is not None and not audit.select(key):
            continue
        if key in audit.expected:
            value = value - evaluator.value(audit.expected[key])
        entries.append((key, value))
    for key, target in audit.expected.items():
        if key not in values:
            entries.append((key, -evaluator.value(target)))
    return entries


def _audit_variables(stage, audits):
    exprs = []
    for audit in audits:
        exprs.extend(audit.form.terms.values())
        exprs.extend(audit.expected.values())
    for rows in _matrices(stage, audits).values():
        for row in rows:
            exprs.extend(row)
    return free_vars(*exprs)


def _matrices(stage, audits):
    return {audit.names or tuple(stage.coframe): stage.matrix(audit.names)
            for audit in audits if audit.form.degree <= 2}


def run_audits(stage, audits, seed=None, trials=None, rng=None):
    """
    Evaluate every audit at shared sample points and turn each into a
    Check. An audit stops at its first nonzero position.
    """
    if trials is None:
        trials = engine_setting('TRIALS')
    rng = _rng(seed, rng)
    matrices = _matrices(stage, audits)
    variables = _audit_variables(stage, audits)
    outcome = {audit.name: None for audit in audits}
    pending = list(audits)
    work = 0
    done = 0

    def compute(evaluator):
        inverses = {names: _inverse_at(evaluator, rows) for names, rows in matrices.items()}
        return [_audit_values(stage, audit, evaluator, inverses) for audit in pending]

    for trial in range(trials):
        if not pending:
            break
        point, results, spent = _regular_point(stage, rng, variables, compute)
        work += spent
        done = trial + 1
        still_pending = []
        for audit, entries in zip(pending, results):
            bad = next(((key, value) for key, value in entries if value != scalars.ZERO), None)
            if bad is None:
                still_pending.append(audit)
                continue
            key, value = bad
            logger.debug(f"{audit.name}: nonzero at {'^'.join(key)} on trial {done}")
            outcome[audit.name] = Check.from_outcome(
                audit.name, False, audit.kind, mode='probabilistic', trials=done,
                witness=format_assignment(point), residual=scalars.format_gaussian(value),
                position='^'.join(key) or '1', work=work,
            )
        pending = still_pending

    checks = []
    for audit in audits:
        check = outcome[audit.name]
        if check is None:
            check = Check.from_outcome(audit.name, True, audit.kind, mode='probabilistic',
                                       trials=done, work=work)
        checks.append(check)
    return checks


def check_basis(stage, seed=None):
    """
    The stage matrix has a nonzero determinant at a regular point.
    """
    rows = stage.matrix()
    variables = free_vars(*(entry for row in rows for entry in row))
    point, det, work = _regular_point(
        stage, _rng(seed, None), variables,
        lambda evaluator: determinant(as_object_matrix([evaluator.values(row) for row in rows])),
    )
    invertible = det != scalars.ZERO
    return Check.from_outcome(
        f"{stage.name}:basis", invertible, mode='exact', trials=1, work=work,
        witness=None if invertible else format_assignment(point),
    )


def structure_audits(stage):
    audits = [Audit(f"{stage.name}:d{name}", stage.residual(name)) for name in stage.equations]
    if stage.name == 'prolonged':
        audits.extend(_prolonged_patterns(stage))
    if stage.name == 'final':
        audits.extend(_normalized_gamma(stage))
    return audits


def _normalized_gamma(stage):
    """
    The rho, zeta and zetabar coefficients of gamma0 read off through the
    dual fields agree with the exact rewrite over the coframe.
    """
    gamma0 = stage.form('gamma0')
    return [
        Audit(f"final:gamma0-{name}", gamma0, names=WITH_DS,
              select=lambda key, name=name: key == (name,),
              expected={(name,): gamma_coefficient(name, stage.ctx)})
        for name in BASE_FORMS
    ]


def _prolonged_patterns(stage):
    """
    d alpha and d beta before the Maurer-Cartan forms delta, gamma are
    introduced: only the positions those forms can occupy may survive.
    """
    W = stage.torsion['W']
    dalpha = stage.residual('alpha', [(2 * I, 'zeta', 'betabar'), (I, 'zetabar', 'beta'),
                                      (W, 'zeta', 'zetabar')])
    dbeta = stage.residual('beta', [(1, 'beta', 'alphabar')])
    return [
        Audit('prolonged:dalpha-pattern', dalpha, select=lambda key: 'rho' not in key),
        Audit('prolonged:dbeta-pattern', dbeta,
              select=lambda key: 'rho' not in key and 'zeta' not in key),
    ]


def verify_structure_equations(stage, seed=None, trials=None):
    """
    Residual of every structure equation of the stage, zero-tested over
    its coframe.
    """
    logger.info(f"verifying {len(stage.equations)} structure equations on the {stage.name} stage")
    return [check_basis(stage, seed)] + run_audits(stage, structure_audits(stage), seed, trials)


def display_audits(stage):
    """
    Audits of transcribed displays against the constructed forms.
    """
    if stage.name == 'prolonged':
        W = compute_W(stage.gp, stage.ctx)
        return [
            Audit('display:delta0', stage.residual('alpha', [
                (1, 'delta0', 'rho'), (2 * I, 'zeta', 'betabar'), (I, 'zetabar', 'beta'),
                (W, 'zeta', 'zetabar')]), DISPLAY),
            Audit('display:gamma0', stage.residual('beta', [
                (1, 'gamma0', 'rho'), (1, 'delta0', 'zeta'), (1, 'beta', 'alphabar')]), DISPLAY),
        ]
    if stage.name != 'final':
        return []

    x = formula_scope(stage.ctx, stage.gp)
    delta = stage.form('delta')
    rho = stage.form('rho')
    V1, V3 = displays.V1_display(x), displays.V3_display(x)
    V2 = displays.V2_display(x)
    V2_printed = displays.V2_display(x, corrected=False)
    W1 = compute_W1_general(stage.gp, stage.ctx)
    delta0 = stage.form('delta0')
    printed_gamma = {('rho',): V1, ('zeta',): V2, ('zetabar',): V3}
    gamma_positions = [
        Audit(f"display:gamma-2:{position}", stage.form('gamma0'), DISPLAY, names=WITH_DS,
              select=lambda key, position=position: key == (position,),
              expected={key: value for key, value in printed_gamma.items() if key == (position,)})
        for position in WITH_DS
    ]
    only_rho = {('rho',)}
    return gamma_positions + [
        Audit('display:delta-2', delta - stage.form('delta_display'), DISPLAY, names=WITH_DS),
        Audit('display:V2', delta, DISPLAY, names=WITH_DS,
              select=lambda key: key in only_rho, expected={('rho',): -V2}),
        Audit('display:V2-printed', delta, DISPLAY, names=WITH_DS,
              select=lambda key: key in only_rho, expected={('rho',): -V2_printed}),
        Audit('display:deltabar-W1', stage.conj(delta0) - delta0 - rho.scale(I * W1), DISPLAY,
              names=WITH_DS),
    ]


def verify_displays(stage, seed=None, trials=None):
    audits = display_audits(stage)
    if not audits:
        return []
    checks = run_audits(stage, audits, seed, trials)
    for check in checks:
        if check.status == 'flagged':
            logger.warning(f"{check.name}: transcribed display disagrees at {check.position}")
    return checks


def verify_closure(stage, seed=None, trials=None):
    """
    d(d theta) = 0. In coordinates for the explicit stages; for the final
    e-structure as closure of the structure equations.
    """
    if stage.name == 'final':
        return [verify_final_closure(stage, seed, trials)]
    audits = [Audit(f"{stage.name}:dd{name}", exterior_d(exterior_d(form, stage.ctx), stage.ctx))
              for name, form in stage.coframe.items()]
    return run_audits(stage, audits, seed, trials)


def verify_final_closure(stage, seed=None, trials=None):
    """
    With every d theta replaced by its right-hand side, d of each
    right-hand side vanishes identically. Torsion coefficients are
    differentiated in coordinates and lifted at each point.
    """
    if trials is None:
        trials = engine_setting('TRIALS')
    rng = _rng(seed, None)
    names = tuple(stage.coframe)
    basis = Basis.lifted(names)
    rows = stage.matrix()
    varying = {}
    for terms in stage.equations.values():
        for coefficient, _, _ in terms:
            coefficient = coefficient if not isinstance(coefficient, int) else const(coefficient)
            if not coefficient.is_const:
                varying[coefficient] = differential(coefficient, stage.basis, stage.ctx)
    exprs = [entry for row in rows for entry in row]
    for coefficient, dc in varying.items():
        exprs.append(coefficient)
        exprs.extend(dc.terms.values())
    variables = free_vars(*exprs)

    def compute(evaluator):
        N = _inverse_at(evaluator, rows)
        value = {}
        dvalue = {}
        for coefficient, dc in varying.items():
            value[coefficient] = const(evaluator.value(coefficient))
            lifted = lifted_values(dc, evaluator, N, names)
            dvalue[coefficient] = lifted_form(basis, {key: const(v) for key, v in lifted.items()}, 1)

        def at_point(coefficient):
            if isinstance(coefficient, int):
                return const(coefficient)
            return value.get(coefficient, coefficient)

        theta = {name: Form.basis_form(basis, name) for name in names}
        dtheta = {
            name: lifted_form(basis, {(left, right): at_point(c) for c, left, right in terms}, 2)
            for name, terms in stage.equations.items()
        }
        bad = []
        for name, terms in stage.equations.items():
            total = Form.zero(3, basis)
            for coefficient, left, right in terms:
                c = at_point(coefficient)
                if coefficient in dvalue:
                    total = total + wedge(dvalue[coefficient], theta[left], theta[right])
                total = total + (wedge(dtheta[left], theta[right]) - wedge(theta[left], dtheta[right])).scale(c)
            for key, entry in total.terms.items():
                number = Evaluator({}).value(entry)
                if number != scalars.ZERO:
                    bad.append((name, '^'.join(names[i] for i in key), number))
        return bad

    work = 0
    for trial in range(trials):
        point, bad, spent = _regular_point(stage, rng, variables, compute)
        work += spent
        if bad:
            name, position, number = bad[0]
            return Check.from_outcome(
                'final:closure', False, mode='probabilistic', trials=trial + 1, work=work,
                witness=format_assignment(point), residual=scalars.format_gaussian(number),
                position=f"d{name}:{position}",
            )
    return Check.from_outcome('final:closure', True, mode='probabilistic', trials=trials, work=work)


def extract_Tfrak_from_ddelta(ctx=None, seed=None, trials=None, mutation=None):
    """
    d delta - delta ^ alpha - delta ^ alphabar - i beta ^ betabar over the
    final coframe: its rho^zeta entry is Tfrak, its rho^zetabar entry the
    conjugate, and nothing else survives.
    """
    stage = build_stage('final', ctx, mutation)
    residual = stage.residual('delta', [(1, 'delta', 'alpha'), (1, 'delta', 'alphabar'),
                                        (I, 'beta', 'betabar')])
    Tfrak, Tt = stage.torsion['Tfrak'], stage.torsion['Tfrakbar']
    torsion_positions = {('rho', 'zeta'), ('rho', 'zetabar')}
    audits = [
        Audit('Tfrak:rho^zeta', residual, select=lambda key: key == ('rho', 'zeta'),
              expected={('rho', 'zeta'): Tfrak}),
        Audit('Tfrak:rho^zetabar', residual, select=lambda key: key == ('rho', 'zetabar'),
              expected={('rho', 'zetabar'): Tt}),
        Audit('Tfrak:other-positions', residual, select=lambda key: key not in torsion_positions),
    ]
    return run_audits(stage, audits, seed, trials)


def _phi(a, b, c):
    return var(jet_var(a, b, c))


def varrho_form(stage):
    """
    The real contact form -1/2 (1 + phi_u^2) du + (i/2 phi_z - 1/2 phi_z phi_u) dz + conjugate.
    """
    phi_z, phi_zb, phi_u = _phi(1, 0, 0), _phi(0, 1, 0), _phi(0, 0, 1)
    half = F(1, 2)
    return Form.one_form(stage.basis, {
        'du': -half * (ONE + phi_u**2),
        'dz': half * I * phi_z - half * phi_z * phi_u,
        'dzb': -half * I * phi_zb - half * phi_zb * phi_u,
    })


def verify_rho_varrho(ctx=None, seed=None, trials=None):
    """
    rho0 against the real contact form, the duality of the initial
    coframe with the frame, and the reality of the contact form.
    """
    stage = build_stage('initial', ctx)
    A, ell = compute_A(stage.ctx), compute_ell(stage.ctx)
    phi_u = _phi(0, 0, 1)
    varrho = varrho_form(stage)
    kwargs = {'mode': 'auto', 'trials': trials, 'seed': seed}

    checks = []
    proportional = stage.form('rho') + varrho.scale(2 / (ell * (ONE + phi_u**2)))
    checks.append(_form_check('rho0-varrho', proportional, **kwargs))
    frame = {'T': (ZERO, ZERO, ell), 'L': (ONE, ZERO, A), 'Lbar': (ZERO, ONE, conjugate(A))}
    dual = {'rho': 'T', 'zeta': 'L', 'zetabar': 'Lbar'}
    for name in ('rho', 'zeta', 'zetabar'):
        for field_name, vector in frame.items():
            target = ONE if dual[name] == field_name else ZERO
            pairing = contract(stage.form(name), vector) - target
            verdict = is_identically_zero(pairing, **kwargs)
            checks.append(Check.from_verdict(f"pairing:{name}({field_name})", verdict))
    checks.append(_form_check('varrho-real', stage.conj(varrho) - varrho, **kwargs))
    return checks


def _form_check(name, w, **kwargs):
    """
    Coefficientwise zero test of a coordinate form; the first nonzero
    coefficient decides.
    """
    work = 0
    trials = 0
    mode = 'structural'
    for key, value in sorted(w.terms.items()):
        verdict = is_identically_zero(value, **kwargs)
        work += verdict.work
        trials = max(trials, verdict.trials)
        mode = verdict.mode
        if not verdict.zero:
            return Check.from_verdict(name, verdict, position='^'.join(w.basis.names[i] for i in key))
    return Check.from_outcome(name, True, mode=mode, trials=trials, work=work)


def verify_stage(name, ctx=None, seed=None, trials=None, mutation=None):
    """
    Structure equations, closure and display audits of one stage.
    """
    stage = build_stage(name, ctx, mutation)
    checks = verify_structure_equations(stage, seed, trials)
    checks.extend(verify_closure(stage, seed, trials))
    checks.extend(verify_displays(stage, seed, trials))
    return checks
