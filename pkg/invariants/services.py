"""
The four engine commands over a validated run configuration. Shared by
the management commands and the HTTP API.
"""
import logging

from jets.calculus import specialize_phi
from jets.context import JetContext
from symbolic import scalars
from symbolic.canonical import expand_canonical
from symbolic.exceptions import ExpansionOverflow, InputError, PoleAtPoint
from symbolic.expr import const, substitute
from symbolic.parser import parse_phi
from symbolic.render import render, render_tree
from symbolic.variables import base_var, group_var
from symbolic.zerotest import is_identically_zero

from .group import GroupParams
from .numeric import agree, check_total_derivative, exact_at, numeric_at
from .pipeline import compute_ell, select_invariant
from .reports import IDENTITY, Check, Report
from .suites import MODEL_PHI, rigid_J, run_identity_suite

logger = logging.getLogger(__name__)


def config_echo(cfg):
    """
    JSON-friendly copy of the validated configuration.
    """
    echo = {}
    for key, value in cfg.items():
        if key == 'phi_expr':
            continue
        if isinstance(value, dict):
            value = {name: scalars.format_gaussian(q) for name, q in sorted(value.items())}
        echo[key] = value
    return echo


def _context(cfg):
    return JetContext.from_settings(rigid=cfg.get('rigid', False))


def group_bindings(values):
    """
    b, c, s with their conjugates; cb = conj(c) etc.
    """
    bindings = {}
    for name, partner in (('b', 'bb'), ('c', 'cb'), ('s', 'sb')):
        if name in values:
            bindings[group_var(name)] = const(values[name])
            bindings[group_var(partner)] = const(scalars.conj(values[name]))
    return bindings


def point_assignment(values):
    """
    A point where missing conjugate partners take conjugate values.
    """
    assignment = {}
    for name, value in values.items():
        v = base_var(name) if name in ('z', 'zb', 'u') else group_var(name)
        assignment[v] = value
        partner = v.conjugate()
        if partner not in assignment and partner.name not in values:
            assignment[partner] = scalars.conj(value)
    return assignment


def _render(e, cfg):
    fmt = cfg.get('format', 'plain')
    return render_tree(e) if fmt == 'json-tree' else render(e, fmt)


def _selected(cfg, ctx, specialize=True):
    expressions = select_invariant(cfg.get('invariant', 'J'), ctx, GroupParams(), cfg.get('mutate'))
    phi = cfg.get('phi_expr')
    bindings = group_bindings(cfg.get('group', {}))
    result = {}
    for name, e in expressions.items():
        if bindings:
            e = substitute(e, bindings)
        if specialize and phi is not None:
            e = specialize_phi(e, phi, ctx)
        result[name] = e
    return result


def _simplified(name, e, cfg, report):
    """
    Canonical numerator/denominator when it fits the budget; the
    monomial count is reported for rigid runs.
    """
    try:
        normal = expand_canonical(e, cfg.get('budget'))
    except ExpansionOverflow:
        if cfg.get('rigid'):
            raise
        logger.warning(f"{name}: canonical form over budget, printing the expression graph")
        return e
    if cfg.get('rigid'):
        report.results[f"{name}_monomials"] = normal.monomial_count
    return normal.as_expr()


def cmd_compute(cfg):
    ctx = _context(cfg)
    report = Report('compute', config_echo(cfg), seed=cfg.get('seed'))
    for name, e in _selected(cfg, ctx).items():
        if cfg.get('phi_expr') is not None or ctx.rigid:
            e = _simplified(name, e, cfg, report)
        report.results[name] = _render(e, cfg)
    logger.info(f"computed {', '.join(report.results)}")
    return report


def _levi_check(cfg, ctx, point):
    """
    ell must not vanish at an evaluation point.
    """
    ell = specialize_phi(compute_ell(ctx), cfg['phi_expr'], ctx)
    needed = {v: point[v] for v in ell.free_vars() if v in point}
    try:
        value = exact_at(ell, needed)
    except PoleAtPoint as exc:
        raise InputError(f"ell has a pole at the point: {exc}") from None
    if not value:
        raise InputError("the point is Levi-degenerate (ell = 0)")


def cmd_eval(cfg):
    """
    Exact value of the invariant at a point; with numeric, also the
    double-precision value and a finite-difference check of D_z.
    """
    ctx = _context(cfg)
    report = Report('eval', config_echo(cfg), seed=cfg.get('seed'))
    point = point_assignment(cfg['point'])
    _levi_check(cfg, ctx, point)
    generic = _selected(cfg, ctx, specialize=False)
    for name, unspecialized in generic.items():
        e = specialize_phi(unspecialized, cfg['phi_expr'], ctx)
        missing = sorted(str(v) for v in e.free_vars() if v not in point)
        if missing:
            raise InputError(f"the point leaves {', '.join(missing)} unassigned")
        needed = {v: point[v] for v in e.free_vars()}
        try:
            exact = exact_at(e, needed)
        except PoleAtPoint as exc:
            raise InputError(f"{name} has a pole at the point: {exc}") from None
        entry = {'exact': scalars.format_gaussian(exact)}
        if cfg.get('numeric'):
            numeric = numeric_at(e, needed)
            entry['numeric'] = f"{numeric.real:.17g}{numeric.imag:+.17g}i"
            report.checks.append(Check.from_outcome(f"{name}:exact-vs-numeric", agree(exact, numeric),
                                                    mode='numeric', trials=1))
            symbolic, estimate, ok = check_total_derivative(unspecialized, cfg['phi_expr'], 'z',
                                                            point, ctx)
            entry['D_z'] = f"{symbolic.real:.12g}{symbolic.imag:+.12g}i"
            report.checks.append(Check.from_outcome(
                f"{name}:D_z-finite-difference", ok, mode='numeric', trials=1,
                detail={'difference': f"{estimate.real:.12g}{estimate.imag:+.12g}i"},
            ))
        report.results[name] = entry
    return report


def cmd_verify(cfg):
    report = Report('verify', config_echo(cfg), seed=cfg.get('seed'))
    checks = run_identity_suite(cfg.get('suite', 'all'), _context(cfg), cfg.get('seed'),
                                cfg.get('trials'), cfg.get('budget'), cfg.get('mutate'))
    report.extend(checks)
    logger.info(f"verify {cfg.get('suite', 'all')}: {len(report.failures)} failed, "
                f"{len(report.flagged)} flagged of {len(checks)}")
    return report


def cmd_expand_rigid(cfg):
    """
    Expand J on rigid jets at b = 0, c = cb = 1 and report its size.
    """
    ctx = _context(cfg)
    report = Report('expand_rigid', config_echo(cfg), seed=cfg.get('seed'))
    J = rigid_J(ctx.max_order, cfg.get('mutate'))
    normal = expand_canonical(J, cfg.get('budget'))
    report.results.update(
        numerator=_render(normal.numerator_expr(), cfg),
        denominator=_render(normal.denominator_expr(), cfg),
        numerator_monomials=normal.monomial_count,
        denominator_monomials=len(normal.denominator),
    )
    report.checks.append(Check.from_outcome('rigid-J-nonzero', not normal.is_zero, IDENTITY,
                                            mode='canonical', work=normal.work))
    model = specialize_phi(J, parse_phi(MODEL_PHI), JetContext(max_order=ctx.max_order, rigid=True))
    verdict = is_identically_zero(model, seed=cfg.get('seed'), trials=cfg.get('trials'),
                                  budget=cfg.get('budget'))
    report.checks.append(Check.from_verdict('rigid-J-model', verdict))
    return report


COMMAND_HANDLERS = {
    'compute': cmd_compute,
    'eval': cmd_eval,
    'verify': cmd_verify,
    'expand_rigid': cmd_expand_rigid,
}


def run_command(cfg):
    return COMMAND_HANDLERS[cfg['command']](cfg)
