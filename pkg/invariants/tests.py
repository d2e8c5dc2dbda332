import json
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.test import APIClient

from forms.stages import build_stage, gamma_coefficient
from forms.structure import (WITH_DS, display_audits, extract_Tfrak_from_ddelta,
                            verify_structure_equations)
from jets.calculus import specialize_phi
from jets.context import JetContext
from symbolic import scalars
from symbolic.exceptions import AlreadyBound
from symbolic.expr import var
from symbolic.parser import parse_phi
from symbolic.variables import base_var, group_var
from symbolic.zerotest import is_identically_zero

from .group import GroupParams
from .numeric import agree, check_total_derivative
from .pipeline import compute_bundle, compute_ell, compute_P, normalized_params, select_invariant
from .reports import DISPLAY, FAIL, FLAGGED, OBSERVATION, PASS, Check, Report
from .serializers import RunConfigSerializer
from .suites import run_identity_suite

CTX = JetContext(max_order=8)
# small enough that large residuals fall back to sampling
BUDGET = 20_000


def run(command, **options):
    """
    call_command returning the parsed JSON report
    """
    out = StringIO()
    call_command(command, stdout=out, **options)
    return json.loads(out.getvalue())


class GroupParamsTests(SimpleTestCase):
    def test_binding_is_single_use(self):
        gp = GroupParams().bind(sb=var(group_var('s')))
        self.assertTrue(gp.is_bound('sb'))
        with self.assertRaises(AlreadyBound):
            gp.bind(sb=var(group_var('b')))

    def test_only_normalizable_parameters_bind(self):
        with self.assertRaises(ValueError):
            GroupParams().bind(c=var(group_var('b')))

    def test_normalized_parameters(self):
        gp = normalized_params(CTX)
        self.assertEqual({name for name, _ in gp.bindings}, {'sb', 'r', 'rb'})


class PipelineTests(SimpleTestCase):
    def test_model_invariants(self):
        model = parse_phi('z*zb')
        self.assertTrue(is_identically_zero(specialize_phi(compute_P(CTX), model, CTX)).zero)
        self.assertTrue(is_identically_zero(specialize_phi(compute_ell(CTX), model, CTX) - 2).zero)

    def test_selectors(self):
        self.assertEqual(set(select_invariant('U', CTX)), {'U1', 'U2'})
        self.assertEqual(set(select_invariant('V-first', CTX)), {'V1', 'V2', 'V3'})
        with self.assertRaises(ValueError):
            select_invariant('K', CTX)


class NumericTests(SimpleTestCase):
    def test_agreement(self):
        self.assertTrue(agree(scalars.gaussian(1, 2), complex(1, 2) + 1e-12))
        self.assertFalse(agree(scalars.gaussian(1, 2), complex(1, 2.001)))

    def test_finite_difference_on_P(self):
        phi = parse_phi('z*zb + u*z*zb')
        quarter = scalars.gaussian((1, 4))
        point = {base_var('z'): quarter, base_var('zb'): quarter,
                 base_var('u'): scalars.gaussian((1, 8))}
        _, _, ok = check_total_derivative(compute_P(CTX), phi, 'z', point, CTX)
        self.assertTrue(ok)


class ReportTests(SimpleTestCase):
    def test_statuses(self):
        self.assertEqual(Check.from_outcome('a', True).status, PASS)
        self.assertEqual(Check.from_outcome('b', False).status, FAIL)
        self.assertEqual(Check.from_outcome('c', False, DISPLAY).status, FLAGGED)

    def test_flagged_checks_do_not_fail_the_run(self):
        report = Report('verify', {}, seed=7)
        report.extend([Check.from_outcome('a', True), Check.from_outcome('c', False, DISPLAY)])
        self.assertTrue(report.passed)
        self.assertEqual(len(report.flagged), 1)
        report.extend([Check.from_outcome('b', False)])
        self.assertFalse(report.passed)

    def test_json_is_deterministic(self):
        report = Report('verify', {'suite': 'brackets', 'seed': 7}, seed=7,
                        checks=[Check.from_outcome('a', True, trials=3, work=10)])
        self.assertEqual(report.to_json(), report.to_json())
        data = json.loads(report.to_json())
        self.assertEqual(data['timings'], {'checks': 1, 'trials': 3, 'work': 10})
        self.assertEqual(list(data), sorted(data))


class SuiteTests(SimpleTestCase):
    def test_brackets(self):
        checks = run_identity_suite('brackets', CTX, seed=7, trials=3, budget=BUDGET)
        self.assertEqual([check.status for check in checks], [PASS] * 3)

    def test_theorem(self):
        checks = {check.name: check
                  for check in run_identity_suite('theorem', CTX, seed=7, trials=3, budget=BUDGET)}
        self.assertTrue(checks['J-Delta'].passed)
        self.assertLessEqual(checks['J-jet-order'].detail['max_order'], 6)

    def test_mutated_J_is_caught(self):
        checks = {check.name: check
                  for check in run_identity_suite('theorem', CTX, seed=7, trials=3, budget=BUDGET,
                                                   mutation='J-7/6')}
        self.assertEqual(checks['J-Delta'].status, FAIL)

    def test_mutated_w1v2_is_caught(self):
        checks = {check.name: check
                  for check in run_identity_suite('w1v2', CTX, seed=7, trials=3, budget=BUDGET,
                                                   mutation='w1v2')}
        failed = checks['W1-V2-compact']
        self.assertEqual(failed.status, FAIL)
        self.assertIsNotNone(failed.residual)

    def test_model(self):
        checks = run_identity_suite('model', CTX, seed=7, trials=3, budget=BUDGET)
        self.assertTrue(all(check.passed for check in checks))
        self.assertIn('nondegenerate-J', [check.name for check in checks])

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            run_identity_suite('nonexistent', CTX)

    def test_reality(self):
        checks = run_identity_suite('reality', CTX, seed=7, trials=3, budget=BUDGET)
        self.assertIn('sbar-involution', [check.name for check in checks])
        self.assertEqual([check.name for check in checks if not check.passed], [])

    def test_jacobi4(self):
        checks = run_identity_suite('jacobi4', CTX, seed=7, trials=3, budget=BUDGET)
        names = [check.name for check in checks]
        self.assertEqual(names[:2], ['hypothesis:H1', 'hypothesis:H2'])
        self.assertEqual([check.name for check in checks if not check.passed], [])

    def test_w2vanish(self):
        checks = {check.name: check
                  for check in run_identity_suite('w2vanish', CTX, seed=7, trials=3, budget=BUDGET)}
        self.assertEqual(checks['W-normalized'].status, PASS)
        self.assertEqual(checks['W2-normalized'].status, PASS)
        self.assertEqual(checks['display:W1'].kind, DISPLAY)

    def test_rigid_report(self):
        checks = {check.name: check
                  for check in run_identity_suite('rigid-report', CTX, seed=7, trials=3, budget=BUDGET)}
        self.assertEqual(checks['rigid-expansion'].kind, OBSERVATION)
        self.assertEqual(checks['rigid-J-model'].status, PASS)

    def test_mutated_J_is_flagged_against_gamma(self):
        checks = {check.name: check
                  for check in run_identity_suite('w1v2', CTX, seed=7, trials=3, budget=BUDGET,
                                                   mutation='J-7/6')}
        self.assertEqual(checks['J-V3'].kind, DISPLAY)
        self.assertEqual(checks['J-V3'].status, FLAGGED)

    def test_mutated_J_breaks_the_final_structure_equations(self):
        stage = build_stage('final', CTX, 'J-7/6')
        checks = {check.name: check for check in verify_structure_equations(stage, seed=7, trials=1)}
        self.assertEqual(checks['final:dbeta'].status, FAIL)
        self.assertEqual(checks['final:drho'].status, PASS)


class TorsionExtractionTests(SimpleTestCase):
    def test_Tfrak_from_ddelta(self):
        checks = extract_Tfrak_from_ddelta(CTX, seed=7, trials=1)
        self.assertEqual({check.name: check.status for check in checks},
                         {'Tfrak:rho^zeta': PASS, 'Tfrak:rho^zetabar': PASS,
                          'Tfrak:other-positions': PASS})

    def test_V1_is_read_off_gamma0(self):
        V1 = select_invariant('V', CTX)['V1']
        verdict = is_identically_zero(V1 - gamma_coefficient('rho', CTX), mode='probabilistic',
                                      trials=2, seed=7)
        self.assertTrue(verdict.zero)
        bundle = compute_bundle(CTX)
        self.assertIs(bundle.V1, V1)
        self.assertIn('gamma0', bundle.provenance['V1'])

    def test_gamma_display_is_audited_per_position(self):
        names = [audit.name for audit in display_audits(build_stage('final', CTX))]
        self.assertEqual([name for name in names if name.startswith('display:gamma-2:')],
                         [f"display:gamma-2:{position}" for position in WITH_DS])


class RunConfigSerializerTests(SimpleTestCase):
    def test_point_shorthand(self):
        serializer = RunConfigSerializer(data={
            'command': 'eval', 'phi': 'z*zb', 'invariant': 'J', 'point': 'z=1/2+1/3i,u=0',
        })
        self.assertTrue(serializer.is_valid(), serializer.errors)
        point = serializer.validated_data['point']
        self.assertEqual(point['z'], scalars.gaussian((1, 2), (1, 3)))
        self.assertEqual(serializer.validated_data['group']['c'], scalars.ONE)

    def test_eval_requirements(self):
        self.assertFalse(RunConfigSerializer(data={'command': 'eval', 'phi': 'z*zb'}).is_valid())
        self.assertFalse(RunConfigSerializer(data={'command': 'eval', 'point': 'z=0,u=0'}).is_valid())

    def test_u_must_be_real(self):
        serializer = RunConfigSerializer(data={'command': 'eval', 'phi': 'z*zb', 'point': 'z=0,u=i'})
        self.assertFalse(serializer.is_valid())
        self.assertIn('point', serializer.errors)

    def test_phi_must_be_real(self):
        serializer = RunConfigSerializer(data={'command': 'compute', 'phi': 'z^2*zb'})
        self.assertFalse(serializer.is_valid())
        self.assertEqual(serializer.errors['phi']['error'], 'NotReal')

    def test_json_format_alias(self):
        serializer = RunConfigSerializer(data={'command': 'compute', 'format': 'json'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['format'], 'json-tree')


class CommandTests(SimpleTestCase):
    def test_compute_model(self):
        self.assertEqual(run('compute', invariant='P', phi='z*zb')['results'], {'P': '0'})
        self.assertEqual(run('compute', invariant='ell', phi='z*zb')['results'], {'ell': '2'})

    def test_compute_rejects_complex_phi(self):
        with self.assertRaises(CommandError) as caught:
            run('compute', invariant='P', phi='z^2*zb')
        self.assertEqual(caught.exception.returncode, 2)

    def test_zero_denominator_is_an_input_error(self):
        for source in ('z*zb + 1/0', 'z*zb/(z-z)'):
            with self.subTest(phi=source):
                with self.assertRaises(CommandError) as caught:
                    run('compute', invariant='P', phi=source)
                self.assertEqual(caught.exception.returncode, 2)
        with self.assertRaises(CommandError) as caught:
            run('eval', phi='z*zb', invariant='ell', point='z=1/0,u=0')
        self.assertEqual(caught.exception.returncode, 2)

    def test_verify_is_reproducible(self):
        first = StringIO()
        second = StringIO()
        call_command('verify', suite='brackets', seed=7, trials=3, budget=BUDGET, stdout=first)
        call_command('verify', suite='brackets', seed=7, trials=3, budget=BUDGET, stdout=second)
        self.assertEqual(first.getvalue(), second.getvalue())
        self.assertTrue(json.loads(first.getvalue())['passed'])

    def test_verify_failure_exit_status(self):
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('verify', suite='w1v2', seed=7, trials=3, budget=BUDGET, mutate='w1v2',
                         stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        report = json.loads(out.getvalue())
        failed = [check for check in report['checks'] if check['status'] == 'fail']
        self.assertEqual(failed[0]['name'], 'W1-V2-compact')
        self.assertIn('residual', failed[0])

    def test_eval_model_J(self):
        report = run('eval', phi='z*zb', invariant='J', point='z=1/2+1/3i,u=0')
        self.assertEqual(report['results']['J']['exact'], '0')

    def test_eval_perturbed_ell(self):
        report = run('eval', phi='z*zb + z^2*zb^2', invariant='ell', point='z=0,u=0')
        self.assertEqual(report['results']['ell']['exact'], '2')

    def test_eval_numeric_cross_checks(self):
        report = run('eval', phi='z*zb + u*z*zb', invariant='P', point='z=1/4,u=1/8', numeric=True)
        self.assertTrue(report['passed'])
        self.assertEqual({check['name'] for check in report['checks']},
                         {'P:exact-vs-numeric', 'P:D_z-finite-difference'})

    def test_eval_levi_degenerate(self):
        with self.assertRaises(CommandError) as caught:
            run('eval', phi='z^2*zb^2', invariant='ell', point='z=0,u=0')
        self.assertEqual(caught.exception.returncode, 2)

    def test_expand_rigid(self):
        report = run('expand_rigid', seed=7, trials=3)
        self.assertGreater(report['results']['numerator_monomials'], 0)
        self.assertTrue(report['passed'])

    def test_expand_rigid_budget(self):
        with self.assertRaises(CommandError) as caught:
            run('expand_rigid', budget=10)
        self.assertEqual(caught.exception.returncode, 2)


class EngineAPITests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()

    def test_compute(self):
        response = self.client.post('/api/compute/', {'invariant': 'ell', 'phi': 'z*zb'}, format='json')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['results'], {'ell': '2'})
        self.assertEqual(response.data['command'], 'compute')

    def test_invalid_phi(self):
        response = self.client.post('/api/compute/', {'phi': 'z +'}, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertIn('phi', response.data)

    def test_zero_denominator_in_phi(self):
        response = self.client.post('/api/compute/', {'phi': 'z*zb/(z-z)'}, format='json')
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.data['phi']['error'], 'ZeroDenominator')

    def test_failed_verification_is_a_report(self):
        payload = {'suite': 'w1v2', 'seed': 7, 'trials': 3, 'budget': BUDGET, 'mutate': 'w1v2'}
        response = self.client.post('/api/verify/', payload, format='json')
        self.assertEqual(response.status_code, 200)
        self.assertFalse(response.data['passed'])

    def test_eval_needs_point(self):
        response = self.client.post('/api/eval/', {'phi': 'z*zb'}, format='json')
        self.assertEqual(response.status_code, 400)
