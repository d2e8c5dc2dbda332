import numpy as np
from django.test import SimpleTestCase

from jets.context import JetContext
from symbolic import scalars
from symbolic.exceptions import DegreeOverflow, SingularBasis, UnrewritableCoefficient
from symbolic.expr import I, ONE, ZERO, var
from symbolic.variables import base_var, group_var, jet_var
from symbolic.zerotest import is_identically_zero

from .algebra import Basis, Form, conjugate_form, contract, differential, exterior_d, wedge
from .linalg import (as_object_matrix, determinant, identity_matrix, inverse_expr_matrix,
                     inverse_matrix)
from .stages import (BASE_FORMS, STAGES, build_stage, dual_field, lifted_form, to_coordinate_basis,
                     to_lifted_basis)
from .structure import (WITH_DS, check_basis, run_audits, structure_audits, verify_rho_varrho,
                        verify_stage)

CTX = JetContext(max_order=8)

z, zb, u = (var(base_var(name)) for name in ('z', 'zb', 'u'))
BASIS = Basis.coordinates(base_var(name) for name in ('z', 'zb', 'u'))


def dx(name):
    return Form.basis_form(BASIS, f"d{name}")


def assert_zero_form(test, w, trials=3):
    for value in w.terms.values():
        test.assertTrue(is_identically_zero(value, mode='probabilistic', trials=trials, seed=7).zero)


class AlgebraTests(SimpleTestCase):
    def test_wedge_is_alternating(self):
        self.assertTrue(wedge(dx('z'), dx('z')).is_zero)
        w = wedge(dx('z'), dx('u'))
        self.assertIs(w.coefficient('du', 'dz'), -w.coefficient('dz', 'du'))
        self.assertIs(w.coefficient('dz', 'du'), ONE)

    def test_degree_bound(self):
        with self.assertRaises(DegreeOverflow):
            wedge(dx('z'), dx('zb'), dx('u'), dx('z'))

    def test_dd_vanishes(self):
        f = var(jet_var(1, 0, 0)) * u / (1 + var(jet_var(1, 1, 0)))
        assert_zero_form(self, exterior_d(differential(f, BASIS, CTX), CTX))

    def test_differential_rejects_stray_parameters(self):
        with self.assertRaises(UnrewritableCoefficient):
            differential(var(group_var('c')) * z, BASIS, CTX)

    def test_contract(self):
        w = dx('z') + dx('u').scale(u)
        self.assertIs(contract(w, (ONE, ZERO, 2)), 1 + 2 * u)

    def test_conjugate_form(self):
        names = ('z', 'zb', 'u')
        w = dx('z').scale(I * u)
        image = conjugate_form(w, lambda index: dx(base_var(names[index]).conjugate().name))
        self.assertIs(image.coefficient('dzb'), -I * u)


class LinalgTests(SimpleTestCase):
    def test_inverse(self):
        X = as_object_matrix([[scalars.gaussian(1), scalars.gaussian(2)],
                              [scalars.gaussian(3), scalars.gaussian(0, 4)]])
        Y = inverse_matrix(X)
        self.assertTrue((X.dot(Y) == identity_matrix(2)).all())

    def test_inverse_with_row_swap(self):
        X = as_object_matrix([[scalars.ZERO, scalars.ONE], [scalars.ONE, scalars.ONE]])
        self.assertTrue((X.dot(inverse_matrix(X)) == identity_matrix(2)).all())

    def test_singular(self):
        X = as_object_matrix([[scalars.ONE, scalars.gaussian(2)],
                              [scalars.gaussian(2), scalars.gaussian(4)]])
        with self.assertRaises(SingularBasis):
            inverse_matrix(X)
        self.assertEqual(determinant(X), scalars.ZERO)

    def test_determinant(self):
        X = as_object_matrix([[scalars.ZERO, scalars.ONE], [scalars.ONE, scalars.gaussian(5)]])
        self.assertEqual(determinant(X), -scalars.ONE)

    def test_symbolic_inverse(self):
        rows = [[z, ONE], [ZERO, zb]]
        N = inverse_expr_matrix(rows)
        for i in range(2):
            for j in range(2):
                entry = sum((rows[i][k] * N[k][j] for k in range(2)), ZERO)
                expected = ONE if i == j else ZERO
                self.assertTrue(is_identically_zero(entry - expected, mode='canonical').zero)

    def test_symbolic_singular(self):
        with self.assertRaises(SingularBasis):
            inverse_expr_matrix([[z, u], [z * z, z * u]])


class StageTests(SimpleTestCase):
    def test_unknown_stage(self):
        with self.assertRaises(ValueError):
            build_stage('nonexistent', CTX)

    def test_basis_change_round_trip(self):
        stage = build_stage('initial', CTX)
        lifted = to_lifted_basis(stage.form('rho'), stage)
        self.assertTrue(is_identically_zero(lifted.coefficient('rho') - 1).zero)
        self.assertTrue(is_identically_zero(lifted.coefficient('zeta')).zero)
        back = to_coordinate_basis(lifted, stage) - stage.form('rho')
        assert_zero_form(self, back)

    def test_lifted_form(self):
        stage = build_stage('initial', CTX)
        basis = stage.lifted_basis
        w = lifted_form(basis, {('zeta', 'rho'): ONE}, 2)
        self.assertIs(w.coefficient('rho', 'zeta'), -ONE)

    def test_basis_is_invertible(self):
        for name in STAGES:
            with self.subTest(stage=name):
                self.assertTrue(check_basis(build_stage(name, CTX), seed=7).passed)

    def test_initial_and_lifted_stages(self):
        for name in ('initial', 'lifted'):
            checks = verify_stage(name, CTX, seed=7, trials=2)
            failed = [check.name for check in checks if check.status == 'fail']
            self.assertEqual(failed, [], name)

    def test_prolonged_stage(self):
        checks = verify_stage('prolonged', CTX, seed=7, trials=1)
        self.assertIn('prolonged:dalpha-pattern', [check.name for check in checks])
        self.assertEqual([check.name for check in checks if check.status == 'fail'], [])

    def test_final_stage(self):
        checks = verify_stage('final', CTX, seed=7, trials=1)
        self.assertEqual([check.name for check in checks if check.status == 'fail'], [])

    def test_rho_varrho(self):
        checks = verify_rho_varrho(CTX, seed=7, trials=2)
        self.assertTrue(all(check.passed for check in checks))
        self.assertIn('varrho-real', [check.name for check in checks])

    def test_dual_fields_pair_with_the_coframe(self):
        stage = build_stage('final', CTX)
        for name in BASE_FORMS:
            field = dual_field(stage, name)
            for other in WITH_DS:
                with self.subTest(field=name, form=other):
                    pairing = contract(stage.form(other), field) - (1 if other == name else 0)
                    verdict = is_identically_zero(pairing, mode='probabilistic', trials=2, seed=7)
                    self.assertTrue(verdict.zero)

    def test_dual_fields_exist_for_base_forms_only(self):
        with self.assertRaises(ValueError):
            dual_field(build_stage('final', CTX), 'alpha')

    def test_normalized_gamma_is_audited(self):
        stage = build_stage('final', CTX)
        checks = run_audits(stage, structure_audits(stage), seed=7, trials=1)
        gamma = {check.name: check.status for check in checks if check.name.startswith('final:gamma0-')}
        self.assertEqual(gamma, {f"final:gamma0-{name}": 'pass' for name in BASE_FORMS})
