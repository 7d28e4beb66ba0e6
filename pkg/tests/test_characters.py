"""
Tests for quadratic character enumeration and evaluation.
"""

import unittest
from unittest.mock import patch

from surjectivity_bound import numfield, quadratic
from surjectivity_bound.characters import character_value, enumerate_characters, s_unit_generator
from surjectivity_bound.exceptions import CharacterError
from surjectivity_bound.field_config import make_field_from_config

from tests.test_field_config import golden_config


class TestEnumeration(unittest.TestCase):
    """
    Test cases for enumerate_characters over Q(sqrt 5).
    """

    def setUp(self):
        self.K = numfield.make_quadratic_field(5)
        self.l2 = numfield.prime_by_key(self.K, "2.4.0")
        self.l11 = numfield.prime_by_key(self.K, "11.11.0")

    def test_empty_S(self):
        result = enumerate_characters(self.K, [])
        self.assertEqual([psi.label for psi in result.characters], ["eps1", "-1", "-1*eps1"])
        self.assertEqual([psi.exponents for psi in result.characters], [(0, 1), (1, 0), (1, 1)])
        self.assertEqual(result.pruned, ())

    def test_inert_two(self):
        result = enumerate_characters(self.K, [self.l2])
        self.assertEqual(len(result.characters), 7)
        self.assertEqual([name for name, _ in result.generators], ["-1", "eps1", "pi[2.4.0]"])
        self.assertEqual(result.pruned, ())

    def test_two_primes(self):
        result = enumerate_characters(self.K, [self.l11, self.l2])
        self.assertEqual(len(result.characters), 15)
        self.assertEqual(result.generators[-1][0], "pi[11.11.0]")

    def test_no_character_is_a_square(self):
        for psi in enumerate_characters(self.K, [self.l2, self.l11]).characters:
            self.assertFalse(quadratic.is_square(self.K, psi.delta))

    def test_conductor_certificate(self):
        by_label = {psi.label: psi for psi in enumerate_characters(self.K, [self.l11]).characters}
        self.assertEqual(by_label["pi[11.11.0]"].conductor_certificate, self.l11)
        self.assertTrue(by_label["eps1"].conductor_certificate.is_unit())

    def test_non_principal_prime(self):
        L = numfield.make_quadratic_field(10)
        (prime,) = numfield.factor_rational_prime(L, 2)
        k, pi = s_unit_generator(L, prime)
        self.assertEqual(k, 2)
        self.assertEqual(numfield.valuation(L, prime, pi), 2)
        self.assertEqual(len(enumerate_characters(L, [prime]).characters), 7)

    def test_general_field_needs_generator(self):
        K = make_field_from_config(golden_config())
        prime = numfield.prime_by_key(K, "11.11.0")
        with self.assertRaises(CharacterError):
            enumerate_characters(K, [prime])

    def test_general_field_with_generator(self):
        cfg = golden_config()
        cfg["s_unit_generators"] = {"11.11.0": [-4, 1]}
        K = make_field_from_config(cfg)
        result = enumerate_characters(K, [numfield.prime_by_key(K, "11.11.0")])
        self.assertEqual(len(result.characters), 7)

    def test_ramified_outside_S_is_pruned(self):
        # 11 generates 11.11.0 * 11.11.1, so its class ramifies at 11.11.1 outside S
        eleven = numfield.from_int(self.K, 11)
        with patch("surjectivity_bound.characters.s_unit_generator", return_value=(1, eleven)):
            result = enumerate_characters(self.K, [self.l11])
        self.assertEqual([psi.label for psi in result.characters], ["eps1", "-1", "-1*eps1"])
        self.assertEqual(
            [entry["character"] for entry in result.pruned],
            ["pi[11.11.0]", "eps1*pi[11.11.0]", "-1*pi[11.11.0]", "-1*eps1*pi[11.11.0]"],
        )
        for entry in result.pruned:
            self.assertEqual(entry["prime"], "11.11.1")
            self.assertEqual(entry["valuation"], 1)


class TestCharacterValues(unittest.TestCase):
    """
    Euler-criterion values at the split primes above 11 and 19.
    """

    def setUp(self):
        self.K = numfield.make_quadratic_field(5)
        self.characters = {psi.label: psi for psi in enumerate_characters(self.K, []).characters}
        self.keys = ["11.11.0", "11.11.1", "19.19.0", "19.19.1"]

    def values(self, label):
        psi = self.characters[label]
        return [character_value(self.K, psi, numfield.prime_by_key(self.K, key)) for key in self.keys]

    def test_unit_character(self):
        self.assertEqual(self.values("eps1"), [1, -1, 1, -1])

    def test_minus_one(self):
        self.assertEqual(self.values("-1"), [-1, -1, -1, -1])

    def test_product_is_multiplicative(self):
        self.assertEqual(self.values("-1*eps1"), [-1, 1, -1, 1])

    def test_inert_prime(self):
        # eps^4 = Norm(eps) = -1 in the residue field F_9
        (three,) = numfield.factor_rational_prime(self.K, 3)
        values = {label: character_value(self.K, psi, three) for label, psi in self.characters.items()}
        self.assertEqual(values, {"eps1": -1, "-1": 1, "-1*eps1": -1})

    def test_zero_at_two_and_ramified(self):
        psi = self.characters["eps1"]
        self.assertEqual(character_value(self.K, psi, numfield.prime_by_key(self.K, "2.4.0")), 0)
        l11 = numfield.prime_by_key(self.K, "11.11.0")
        with_pi = {p.label: p for p in enumerate_characters(self.K, [l11]).characters}
        self.assertEqual(character_value(self.K, with_pi["pi[11.11.0]"], l11), 0)

    def test_non_prime_rejected(self):
        composite = numfield.ideal_mul(
            self.K, numfield.prime_by_key(self.K, "11.11.0"), numfield.prime_by_key(self.K, "19.19.0")
        )
        fake = numfield.IntegralIdeal(composite.hnf, residue_char=11, e=1, f=1, index=0)
        with self.assertRaises(CharacterError):
            character_value(self.K, self.characters["eps1"], fake)


if __name__ == '__main__':
    unittest.main()
