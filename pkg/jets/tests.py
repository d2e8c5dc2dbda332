from django.test import SimpleTestCase, override_settings

from symbolic.exceptions import JetOrderExceeded, SingularLocusExhausted
from symbolic.expr import I, ONE, ZERO, var
from symbolic.parser import parse_phi
from symbolic.variables import base_var, group_var, jet_var
from symbolic.zerotest import is_identically_zero

from .calculus import restrict_rigid, specialize_phi, total_derivative
from .context import JetContext
from .fields import VectorField, apply_field, lie_bracket, make_frame
from .sampling import random_real_assignment

z, zb, u = (var(base_var(name)) for name in ('z', 'zb', 'u'))


def phi(a, b, c):
    return var(jet_var(a, b, c))


class TotalDerivativeTests(SimpleTestCase):
    ctx = JetContext(max_order=4)

    def test_jets_bump_their_index(self):
        self.assertIs(total_derivative(phi(0, 0, 0), 'z', self.ctx), phi(1, 0, 0))
        self.assertIs(total_derivative(phi(1, 0, 0), 'u', self.ctx), phi(1, 0, 1))

    def test_base_and_group_variables(self):
        self.assertIs(total_derivative(z * zb, 'z', self.ctx), zb)
        self.assertIs(total_derivative(var(group_var('c')), 'z', self.ctx), ZERO)

    def test_total_derivatives_commute(self):
        e = phi(1, 0, 0) * phi(0, 1, 1) / (1 + phi(1, 1, 0))
        zu = total_derivative(total_derivative(e, 'z', self.ctx), 'u', self.ctx)
        uz = total_derivative(total_derivative(e, 'u', self.ctx), 'z', self.ctx)
        self.assertTrue(is_identically_zero(zu - uz, mode='canonical').zero)

    def test_order_bound(self):
        with self.assertRaises(JetOrderExceeded):
            total_derivative(phi(1, 1, 0), 'z', JetContext(max_order=2))

    def test_rigid_kills_u_jets(self):
        rigid = JetContext(max_order=4, rigid=True)
        self.assertIs(total_derivative(phi(1, 0, 0), 'u', rigid), ZERO)
        self.assertIs(total_derivative(phi(0, 0, 1), 'z', rigid), ZERO)
        self.assertIs(restrict_rigid(phi(1, 0, 0) + phi(0, 1, 1)), phi(1, 0, 0))


class SpecializeTests(SimpleTestCase):
    def test_model_jets(self):
        model = parse_phi('z*zb')
        self.assertIs(specialize_phi(phi(1, 1, 0), model), ONE)
        self.assertIs(specialize_phi(phi(0, 0, 1), model), ZERO)
        self.assertIs(specialize_phi(phi(1, 0, 0), model), zb)

    def test_order_bound(self):
        with self.assertRaises(JetOrderExceeded):
            specialize_phi(phi(1, 1, 0), parse_phi('z*zb'), JetContext(max_order=1))

    def test_specialization_is_a_homomorphism(self):
        model = parse_phi('z*zb + u*z*zb + z^2*zb^2')
        ctx = JetContext(max_order=4)
        left = phi(1, 0, 0) * phi(0, 1, 1) + z
        right = 1 + phi(1, 1, 0) * phi(0, 0, 1)
        combined = specialize_phi(left * right + left / right, model, ctx)
        separate = (specialize_phi(left, model, ctx) * specialize_phi(right, model, ctx)
                    + specialize_phi(left, model, ctx) / specialize_phi(right, model, ctx))
        self.assertTrue(is_identically_zero(combined - separate, mode='canonical').zero)

    def test_specialization_commutes_with_total_derivatives(self):
        model = parse_phi('z*zb + u*z*zb')
        ctx = JetContext(max_order=4)
        e = phi(1, 0, 0) * phi(0, 1, 0) + u * phi(1, 1, 0)
        for direction in ('z', 'zb', 'u'):
            residual = (specialize_phi(total_derivative(e, direction, ctx), model, ctx)
                        - total_derivative(specialize_phi(e, model, ctx), direction, ctx))
            self.assertTrue(is_identically_zero(residual, mode='canonical').zero)


class VectorFieldTests(SimpleTestCase):
    ctx = JetContext(max_order=4)

    def test_arithmetic(self):
        X = VectorField(ONE, z, ZERO)
        self.assertEqual((X - X).components, (ZERO, ZERO, ZERO))
        self.assertEqual((X + X).components, X.scale(2).components)

    def test_bracket_of_coordinate_fields(self):
        D_z = VectorField(ONE, ZERO, ZERO)
        zD_u = VectorField(ZERO, ZERO, z)
        self.assertEqual(lie_bracket(D_z, zD_u, self.ctx).components, (ZERO, ZERO, ONE))

    def test_apply_field(self):
        X = VectorField(u, ZERO, ONE)
        residual = apply_field(X, z * u, self.ctx) - (u * u + z)
        self.assertTrue(is_identically_zero(residual, mode='canonical').zero)

    def test_frame_of_the_model(self):
        frame = make_frame(self.ctx)
        model = parse_phi('z*zb')
        ell = specialize_phi(frame.T.coef_u, model, self.ctx)
        self.assertTrue(is_identically_zero(ell - 2, mode='canonical').zero)
        self.assertTrue(is_identically_zero(frame.Lbar.coef_u - frame.L.coef_u.conjugate()).zero)

    def test_frame_bracket(self):
        frame = make_frame(self.ctx)
        residual = lie_bracket(frame.L, frame.Lbar, self.ctx) + frame.T.scale(I)
        for component in residual.components:
            verdict = is_identically_zero(component, mode='probabilistic', trials=5, seed=7)
            self.assertTrue(verdict.zero)

    def assertJacobi(self, X, Y, Z, ctx, **zero_test):
        cyclic = (lie_bracket(X, lie_bracket(Y, Z, ctx), ctx)
                  + lie_bracket(Y, lie_bracket(Z, X, ctx), ctx)
                  + lie_bracket(Z, lie_bracket(X, Y, ctx), ctx))
        for component in cyclic.components:
            self.assertTrue(is_identically_zero(component, **zero_test).zero)

    def test_jacobi_identity(self):
        X = VectorField(z * u, ONE, zb)
        Y = VectorField(u, z * zb, phi(1, 0, 0))
        Z = VectorField(phi(0, 1, 0), ZERO, z + u * u)
        self.assertJacobi(X, Y, Z, self.ctx, mode='canonical')

    def test_jacobi_identity_for_the_frame(self):
        ctx = JetContext(max_order=8)
        frame = make_frame(ctx)
        self.assertJacobi(frame.L, frame.Lbar, frame.T, ctx, mode='probabilistic', trials=3, seed=7)


class SamplingTests(SimpleTestCase):
    ctx = JetContext(max_order=4)

    def test_exclusions_are_avoided(self):
        exclusion = phi(1, 1, 0) - 1
        point = random_real_assignment(5, self.ctx, [exclusion], variables=[base_var('z')])
        self.assertIn(base_var('zb'), point)
        self.assertEqual(point, random_real_assignment(5, self.ctx, [exclusion],
                                                       variables=[base_var('z')]))

    def test_rigid_points_zero_u_jets(self):
        rigid = JetContext(max_order=4, rigid=True)
        point = random_real_assignment(5, rigid, [phi(1, 1, 0)], variables=[jet_var(1, 0, 1)])
        self.assertFalse(point[jet_var(1, 0, 1)])

    @override_settings(CR_ENGINE={'RETRY_BUDGET': 3})
    def test_exhausted(self):
        with self.assertRaises(SingularLocusExhausted):
            random_real_assignment(5, self.ctx, [ZERO])
