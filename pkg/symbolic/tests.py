import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as F

import numpy as np
from django.test import SimpleTestCase

from . import scalars
from .canonical import expand_canonical
from .evaluation import eval_exact, eval_numeric
from .exceptions import (CyclicBinding, DivisionByZeroExpr, ExpansionOverflow, IllegalVariable,
                         NotReal, PoleAtPoint, RenderTooLarge, SourceSyntaxError, UnknownIdentifier,
                         ZeroDenominator)
from .expr import (I, ONE, ZERO, arith, conjugate, const, div, free_vars, node_count, substitute,
                   var)
from .parser import parse_expression, parse_phi
from .render import render, render_tree
from .sampling import real_consistent_assignment
from .variables import base_var, group_var, jet_var
from .zerotest import is_identically_zero

z, zb, u = (var(base_var(name)) for name in ('z', 'zb', 'u'))

LEAVES = (z, zb, u, var(jet_var(1, 0, 0)), I, const(2), const(F(-1, 3)))
OPERATORS = ('+', '-', '*', '/')


def random_expression(rng, depth):
    """
    Small rational expression; every quotient divides by |r|^2 + 1.
    """
    if depth == 0 or rng.random() < 0.3:
        return LEAVES[int(rng.integers(len(LEAVES)))]
    op = OPERATORS[int(rng.integers(len(OPERATORS)))]
    left, right = random_expression(rng, depth - 1), random_expression(rng, depth - 1)
    if op == '/':
        right = right * conjugate(right) + 1
    return arith(left, right, op)


def corpus(seed, size=8, depth=3):
    rng = np.random.default_rng(seed)
    return [random_expression(rng, depth) for _ in range(size)]


class ScalarTests(SimpleTestCase):
    def test_format_is_reparseable(self):
        q = scalars.gaussian(F(1, 2), F(-1, 3))
        self.assertEqual(scalars.format_gaussian(q), '1/2 - 1/3*i')
        self.assertEqual(parse_expression(scalars.format_gaussian(q)).payload, q)

    def test_conj_and_complex(self):
        q = scalars.gaussian(3, 4)
        self.assertEqual(scalars.conj(q), scalars.gaussian(3, -4))
        self.assertEqual(scalars.to_complex(q), complex(3, 4))

    def test_modular_unit_squares_to_minus_one(self):
        field = scalars.ModularField()
        unit = field.from_gaussian(scalars.I)
        self.assertEqual(unit * unit, -field.one)


class ExprTests(SimpleTestCase):
    def test_nodes_are_interned(self):
        self.assertIs(z + 1, 1 + z)
        self.assertIs(z * zb, zb * z)

    def test_constant_folding(self):
        self.assertIs(z - z, ZERO)
        self.assertIs(const(2) * const(F(1, 2)), ONE)
        self.assertIs(z * 0, ZERO)

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZeroExpr):
            div(z, const(0))
        with self.assertRaises(DivisionByZeroExpr):
            div(ONE, (z + 1)**2 - z**2 - 2 * z - 1)

    def test_self_quotient_checks_denominator(self):
        vanishing = (z + 1)**2 - z**2 - 2 * z - 1
        with self.assertRaises(DivisionByZeroExpr):
            div(vanishing, vanishing)
        self.assertIs(div(z + 1, z + 1), ONE)

    def test_concurrent_conjugation_shares_one_image(self):
        e = (z + 17)**3 * var(jet_var(3, 1, 2)) / (zb**2 + u + 19)
        with ThreadPoolExecutor(max_workers=4) as pool:
            images = list(pool.map(lambda _: conjugate(e), range(16)))
        self.assertTrue(all(image is images[0] for image in images))
        self.assertIs(conjugate(images[0]), e)

    def test_conjugation_is_an_involution(self):
        e = I * z**2 / (zb + 3)
        self.assertIs(conjugate(conjugate(e)), e)
        residual = conjugate(e) - (-I) * zb**2 / (z + 3)
        self.assertTrue(is_identically_zero(residual, mode='canonical').zero)

    def test_jet_conjugation_swaps_indices(self):
        self.assertEqual(jet_var(2, 1, 3).conjugate(), jet_var(1, 2, 3))
        self.assertEqual(group_var('c').conjugate(), group_var('cb'))

    def test_substitution_resolves_chains(self):
        b, c = var(group_var('b')), var(group_var('c'))
        result = substitute(b * u, {group_var('b'): c + 1, group_var('c'): z})
        self.assertTrue(is_identically_zero(result - (z + 1) * u, mode='canonical').zero)

    def test_cyclic_binding(self):
        b, c = var(group_var('b')), var(group_var('c'))
        with self.assertRaises(CyclicBinding):
            substitute(b, {group_var('b'): c, group_var('c'): b})

    def test_free_vars(self):
        self.assertEqual(free_vars(z * u + 1), {base_var('z'), base_var('u')})


class EvaluationTests(SimpleTestCase):
    def test_exact_and_numeric(self):
        e = (z + 1) / (z - 1)
        point = {base_var('z'): scalars.gaussian(3)}
        self.assertEqual(eval_exact(e, point), scalars.gaussian(2))
        self.assertAlmostEqual(eval_numeric(e, point), 2.0)

    def test_pole(self):
        with self.assertRaises(PoleAtPoint):
            eval_exact(ONE / (z - 1), {base_var('z'): scalars.ONE})


class CanonicalTests(SimpleTestCase):
    def test_identity_expands_to_zero(self):
        self.assertTrue(expand_canonical((z + 1)**2 - z**2 - 2 * z - 1).is_zero)

    def test_monomial_count(self):
        self.assertEqual(expand_canonical((z + zb)**2).monomial_count, 3)

    def test_quotients_cancel(self):
        e = (z**2 - 1) / (z - 1) - z - 1
        self.assertTrue(expand_canonical(e).is_zero)

    def test_budget(self):
        with self.assertRaises(ExpansionOverflow):
            expand_canonical((z + zb + u)**6, budget=10)


class ZeroTestTests(SimpleTestCase):
    def test_probabilistic_witness_is_reproducible(self):
        e = z - zb
        first = is_identically_zero(e, mode='probabilistic', trials=5, seed=11)
        second = is_identically_zero(e, mode='probabilistic', trials=5, seed=11)
        self.assertFalse(first.zero)
        self.assertEqual(first.witness, second.witness)
        self.assertEqual(first.residual, second.residual)

    def test_probabilistic_zero(self):
        e = (z + zb) * (z - zb) - z**2 + zb**2
        verdict = is_identically_zero(e, mode='probabilistic', trials=20, seed=7)
        self.assertTrue(verdict.zero)
        self.assertEqual(verdict.trials, 20)

    def test_auto_falls_back_to_sampling(self):
        e = ((z + u) * (zb + u))**3 - (z + u)**3 * (zb + u)**3
        verdict = is_identically_zero(e, budget=10, seed=7)
        self.assertTrue(verdict.zero)
        self.assertEqual(verdict.mode, 'probabilistic')

    def test_points_respect_reality(self):
        rng = np.random.default_rng(3)
        point = real_consistent_assignment([base_var('z'), base_var('u'), jet_var(1, 1, 0)], rng)
        self.assertEqual(point[base_var('zb')], scalars.conj(point[base_var('z')]))
        self.assertTrue(scalars.is_real(point[base_var('u')]))
        self.assertTrue(scalars.is_real(point[jet_var(1, 1, 0)]))


class ParserTests(SimpleTestCase):
    def test_precedence(self):
        e = parse_expression('1 + 2*z^2 - u/3')
        self.assertTrue(is_identically_zero(e - (1 + 2 * z**2 - u / 3), mode='canonical').zero)

    def test_unary_minus_and_negative_exponent(self):
        e = parse_expression('-z^-2')
        self.assertTrue(is_identically_zero(e + ONE / z**2, mode='canonical').zero)

    def test_jets_and_conj(self):
        e = parse_expression('phi[1,0,2] + conj(i*z)')
        expected = var(jet_var(1, 0, 2)) - I * zb
        self.assertTrue(is_identically_zero(e - expected, mode='canonical').zero)

    def test_syntax_error_span(self):
        with self.assertRaises(SourceSyntaxError) as caught:
            parse_expression('z + )')
        self.assertEqual(caught.exception.span, (4, 5))

    def test_chained_power(self):
        with self.assertRaises(SourceSyntaxError):
            parse_expression('z^2^3')

    def test_unknown_identifier(self):
        with self.assertRaises(UnknownIdentifier):
            parse_expression('z*w')

    def test_phi_must_be_real(self):
        self.assertIs(parse_phi('z*zb + u*z*zb'), parse_expression('z*zb + u*z*zb'))
        with self.assertRaises(NotReal) as caught:
            parse_phi('z^2*zb')
        self.assertTrue(caught.exception.witness)

    def test_phi_uses_base_variables_only(self):
        with self.assertRaises(IllegalVariable):
            parse_phi('z*zb*b*bb')

    def test_zero_denominator_is_an_input_error(self):
        with self.assertRaises(ZeroDenominator) as caught:
            parse_expression('z*zb/(z-z)')
        self.assertEqual(caught.exception.span, (0, 10))
        with self.assertRaises(ZeroDenominator) as caught:
            parse_expression('z*zb + 1/0')
        self.assertEqual(caught.exception.span, (7, 10))
        with self.assertRaises(ZeroDenominator) as caught:
            parse_expression('(z-z)^-1')
        self.assertEqual(caught.exception.span, (0, 8))


class RenderTests(SimpleTestCase):
    def test_plain(self):
        self.assertEqual(render(parse_expression('z*zb')), 'z*zb')
        self.assertEqual(render(const(2)), '2')

    def test_plain_reparses(self):
        e = parse_expression('(z - 2*zb)^3/(1 + u^2) - i/5*phi[2,1,0]')
        again = parse_expression(render(e))
        self.assertTrue(is_identically_zero(again - e, mode='canonical').zero)

    def test_tex(self):
        self.assertIn(r'\bar{z}', render(zb / z, 'tex'))

    def test_json_tree_shares_nodes(self):
        shared = z + 1
        e = shared * shared.conjugate() + shared
        tree = render_tree(e)
        self.assertEqual(len(tree['nodes']), node_count(e))
        self.assertEqual(json.loads(render(shared, 'json-tree')), render_tree(shared))

    def test_limit(self):
        with self.assertRaises(RenderTooLarge):
            render((z + zb + u)**3 * (z - u), limit=5)


class GeneratedCorpusTests(SimpleTestCase):
    def assertVanishes(self, e):
        self.assertTrue(is_identically_zero(e, mode='canonical').zero)

    def test_conjugation_is_an_automorphism(self):
        pairs = zip(corpus(1), corpus(2))
        for left, right in pairs:
            self.assertIs(conjugate(conjugate(left)), left)
            for op in ('+', '-', '*'):
                image = conjugate(arith(left, right, op))
                self.assertVanishes(image - arith(conjugate(left), conjugate(right), op))
            denominator = right * conjugate(right) + 1
            image = conjugate(left / denominator)
            self.assertVanishes(image - conjugate(left) / conjugate(denominator))

    def test_evaluation_commutes_with_substitution(self):
        rng = np.random.default_rng(5)
        replacement = (z + zb) / 3
        for e in corpus(3):
            point = real_consistent_assignment((free_vars(e) | {base_var('z')}) - {base_var('u')}, rng)
            extended = dict(point)
            extended[base_var('u')] = eval_exact(replacement, point)
            substituted = substitute(e, {base_var('u'): replacement})
            self.assertEqual(eval_exact(substituted, point), eval_exact(e, extended))

    def test_canonical_and_probabilistic_agree(self):
        cases = []
        for left, right in zip(corpus(4), corpus(6)):
            cases.append(left - right)
            cases.append((left + right) * (left - right) - (left * left - right * right))
        for e in cases:
            canonical = is_identically_zero(e, mode='canonical')
            sampled = is_identically_zero(e, mode='probabilistic', trials=5, seed=7)
            self.assertEqual(canonical.zero, sampled.zero)

    def test_expansion_is_idempotent(self):
        rng = np.random.default_rng(9)
        for e in corpus(8):
            normal = expand_canonical(e)
            again = expand_canonical(normal.as_expr())
            self.assertEqual(again.monomial_count, normal.monomial_count)
            self.assertTrue(expand_canonical(normal.as_expr() - e).is_zero)
            point = real_consistent_assignment(free_vars(e) | {base_var('u')}, rng)
            self.assertEqual(eval_exact(normal.as_expr(), point), eval_exact(e, point))

    def test_render_round_trip(self):
        for e in corpus(10):
            self.assertVanishes(parse_expression(render(e)) - e)
