"""
Tests for real quadratic fields: units, class numbers, principal ideals and squares.
"""

import unittest
from unittest.mock import patch

from hypothesis import given, settings, strategies as st

from surjectivity_bound import numfield, quadratic
from surjectivity_bound.field_config import make_field_from_config
from surjectivity_bound.exceptions import FieldError
from surjectivity_bound.numfield import AlgebraicInteger

from tests import oracles
from tests.test_field_config import golden_config


class TestFundamentalUnit(unittest.TestCase):
    """
    Test cases for the continued-fraction unit search.
    """

    def test_known_units(self):
        self.assertEqual(quadratic.fundamental_unit(2), (1, 1))
        self.assertEqual(quadratic.fundamental_unit(3), (2, 1))
        self.assertEqual(quadratic.fundamental_unit(5), (0, 1))
        self.assertEqual(quadratic.fundamental_unit(7), (8, 3))

    def test_matches_minimal_search(self):
        for m in oracles.squarefree_between(2, 60):
            with self.subTest(m=m):
                unit = quadratic.fundamental_unit(m)
                self.assertEqual(unit, oracles.minimal_unit(m))
                self.assertEqual(abs(oracles.quad_norm(m, unit)), 1)

    def test_box_units_are_powers(self):
        for m in (2, 3, 5, 6, 13):
            unit = quadratic.fundamental_unit(m)
            powers = set()
            k = 1
            while True:
                candidate = oracles.quad_power(m, unit, k)
                if max(abs(candidate[0]), abs(candidate[1])) > 50:
                    break
                powers.add(candidate)
                k += 1
            with self.subTest(m=m):
                self.assertEqual(set(oracles.box_units(m)), powers)

    def test_discriminant(self):
        self.assertEqual(quadratic.field_discriminant(5), 5)
        self.assertEqual(quadratic.field_discriminant(13), 13)
        self.assertEqual(quadratic.field_discriminant(3), 12)
        self.assertEqual(quadratic.field_discriminant(2), 8)


class TestClassNumbers(unittest.TestCase):
    """
    Test cases for class numbers from cycles of reduced forms.
    """

    def test_small_fields(self):
        expected = {2: 1, 3: 1, 5: 1, 6: 1, 7: 1, 10: 2, 13: 1, 15: 2, 17: 1, 26: 2, 30: 2}
        for m, h in expected.items():
            with self.subTest(m=m):
                self.assertEqual(quadratic.class_numbers(m)[0], h)

    def test_narrow_relation(self):
        # h+ = h when the fundamental unit has norm -1, else h+ = 2h
        for m in oracles.squarefree_between(2, 40):
            h, h_plus = quadratic.class_numbers(m)
            unit_norm = oracles.quad_norm(m, quadratic.fundamental_unit(m))
            with self.subTest(m=m):
                self.assertEqual(h_plus, h if unit_norm == -1 else 2 * h)

    def test_fundamental_unit_norm(self):
        self.assertEqual([quadratic.fundamental_unit_norm(m) for m in (2, 3, 5, 6, 13)], [-1, 1, -1, 1, -1])

    def test_narrow_class_number(self):
        expected = {2: 1, 3: 2, 5: 1, 6: 2, 10: 2, 15: 4}
        for m, h_plus in expected.items():
            with self.subTest(m=m):
                self.assertEqual(quadratic.narrow_class_number(numfield.make_quadratic_field(m)), h_plus)

    def test_narrow_class_number_needs_quadratic_field(self):
        with self.assertRaises(FieldError):
            quadratic.narrow_class_number(make_field_from_config(golden_config()))

    def test_relation_checked_on_construction(self):
        quadratic.check_narrow_relation(1, 2, 1)
        quadratic.check_narrow_relation(2, 2, -1)
        # Q(sqrt 3) has a unit of norm +1, so h+ = 1 is inconsistent with h = 1
        with patch("surjectivity_bound.quadratic.class_numbers", return_value=(1, 1)):
            with self.assertRaises(FieldError) as ctx:
                quadratic.make_quadratic_field.__wrapped__(3)
        self.assertEqual(ctx.exception.diagnostic["unit_norm"], 1)

    def test_reduced_forms_discriminant(self):
        for D in (5, 8, 12, 40):
            for a, b, c in quadratic.reduced_forms(D):
                self.assertEqual(b * b - 4 * a * c, D)

    def test_rho_preserves_discriminant(self):
        for form in quadratic.reduced_forms(40):
            a, b, c = quadratic.rho(form, 40)
            self.assertEqual(b * b - 4 * a * c, 40)

    def test_rejects_bad_m(self):
        for m in (4, 1, 12, 0):
            with self.subTest(m=m):
                with self.assertRaises(FieldError):
                    quadratic.make_quadratic_field(m)


class TestSplitting(unittest.TestCase):
    """
    Test cases for prime factorization through the Kronecker symbol.
    """

    def test_kronecker(self):
        self.assertEqual(quadratic.kronecker(5, 2), -1)
        self.assertEqual(quadratic.kronecker(5, 11), 1)
        self.assertEqual(quadratic.kronecker(5, 5), 0)
        self.assertEqual(quadratic.kronecker(8, 7), 1)
        self.assertEqual(quadratic.kronecker(8, 3), -1)

    def test_residue_of_w(self):
        K = numfield.make_quadratic_field(5)
        primes = numfield.factor_rational_prime(K, 19)
        self.assertEqual([quadratic.residue_of_w(K, p) for p in primes], [5, 15])
        (inert,) = numfield.factor_rational_prime(K, 2)
        self.assertIsNone(quadratic.residue_of_w(K, inert))

    def test_ramified_two_in_sqrt_three(self):
        K = numfield.make_quadratic_field(3)
        (prime,) = numfield.factor_rational_prime(K, 2)
        self.assertEqual((prime.e, prime.f, prime.norm), (2, 1, 2))


class TestPrincipalIdeals(unittest.TestCase):
    """
    Test cases for principal_generator and ideal_class_order.
    """

    def test_generator_of_split_prime(self):
        K = numfield.make_quadratic_field(5)
        for prime in numfield.factor_rational_prime(K, 11):
            generator = quadratic.principal_generator(K, prime)
            self.assertIsNotNone(generator)
            self.assertEqual(numfield.ideal_from_generators(K, [generator]), prime)

    def test_non_principal_prime(self):
        K = numfield.make_quadratic_field(10)
        (prime,) = numfield.factor_rational_prime(K, 2)
        self.assertIsNone(quadratic.principal_generator(K, prime))
        k, generator = quadratic.ideal_class_order(K, prime)
        self.assertEqual(k, 2)
        self.assertEqual(numfield.ideal_from_generators(K, [generator]), numfield.ideal_power(K, prime, 2))

    def test_unit_ideal(self):
        K = numfield.make_quadratic_field(2)
        self.assertEqual(quadratic.principal_generator(K, numfield.unit_ideal(K)), numfield.one(K))

    @settings(deadline=None, max_examples=60)
    @given(st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda c: c != (0, 0)))
    def test_recovers_principal_ideals(self, coords):
        K = numfield.make_quadratic_field(2)
        ideal = numfield.ideal_from_generators(K, [AlgebraicInteger(coords)])
        generator = quadratic.principal_generator(K, ideal)
        self.assertIsNotNone(generator)
        self.assertEqual(numfield.ideal_from_generators(K, [generator]), ideal)


class TestIsSquare(unittest.TestCase):
    """
    Test cases for square detection.
    """

    def setUp(self):
        self.K = numfield.make_quadratic_field(5)
        self.L = numfield.make_quadratic_field(2)

    def test_known_values(self):
        self.assertTrue(quadratic.is_square(self.K, numfield.from_int(self.K, 9)))
        self.assertTrue(quadratic.is_square(self.K, numfield.from_int(self.K, 5)))
        self.assertTrue(quadratic.is_square(self.L, numfield.from_int(self.L, 8)))
        self.assertFalse(quadratic.is_square(self.K, numfield.from_int(self.K, 2)))
        self.assertFalse(quadratic.is_square(self.K, AlgebraicInteger((0, 1))))
        self.assertFalse(quadratic.is_square(self.K, numfield.from_int(self.K, -1)))

    def test_unit_squares(self):
        eps = AlgebraicInteger((0, 1))
        self.assertTrue(quadratic.is_square(self.K, numfield.mul(self.K, eps, eps)))

    @settings(deadline=None, max_examples=100)
    @given(st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
    def test_every_square_detected(self, coords):
        for K in (self.K, self.L):
            gamma = AlgebraicInteger(coords)
            self.assertTrue(quadratic.is_square(K, numfield.mul(K, gamma, gamma)))


if __name__ == '__main__':
    unittest.main()
