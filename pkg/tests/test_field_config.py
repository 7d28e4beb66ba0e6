"""
Tests for field-description documents.
"""

import json
import os
import shutil
import tempfile
import unittest

from surjectivity_bound import numfield
from surjectivity_bound.exceptions import FieldError
from surjectivity_bound.field_config import field_to_config, load_field_config, make_field_from_config
from surjectivity_bound.numfield import AlgebraicInteger


def golden_config():
    """Q(sqrt 5) described without the quadratic shortcut, with the primes above 11."""
    cfg = field_to_config(numfield.make_quadratic_field(5))
    del cfg["quadratic_m"]
    cfg["label"] = "2.2.5.1"
    cfg["primes"] = [
        {"hnf": [[1, 4], [0, 11]], "residue_char": 11, "e": 1, "f": 1, "index": 1},
        {"hnf": [[1, 8], [0, 11]], "residue_char": 11, "e": 1, "f": 1, "index": 0},
    ]
    return cfg


class TestFieldConfig(unittest.TestCase):
    """
    Test cases for building fields from documents.
    """

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_quadratic_round_trip(self):
        K = numfield.make_quadratic_field(5)
        self.assertEqual(make_field_from_config(field_to_config(K)), K)

    def test_general_field_primes(self):
        K = make_field_from_config(golden_config())
        self.assertIsNone(K.quadratic_m)
        primes = numfield.factor_rational_prime(K, 11)
        self.assertEqual([p.key for p in primes], ["11.11.0", "11.11.1"])
        self.assertTrue(numfield.ideal_contains(primes[0], AlgebraicInteger((-4, 1))))
        self.assertEqual(numfield.factor_rational_prime(K, 7), ())

    def test_config_round_trip(self):
        K = make_field_from_config(golden_config())
        self.assertEqual(make_field_from_config(field_to_config(K)), K)

    def test_rational_field(self):
        cfg = {
            "degree": 1,
            "poly": [1, 0],
            "integral_basis": [[1]],
            "mult_table": [[[1]]],
            "disc": 1,
            "automorphisms": [[[1]]],
            "units": [],
            "class_number": 1,
        }
        K = make_field_from_config(cfg)
        self.assertEqual(K.degree, 1)
        self.assertEqual(K.label, "1.1.1.1")

    def test_s_unit_generators(self):
        cfg = golden_config()
        cfg["s_unit_generators"] = {"11.11.0": [-4, 1]}
        K = make_field_from_config(cfg)
        self.assertEqual(K.s_unit_generators, (("11.11.0", (-4, 1)),))

    def test_bad_s_unit_generator(self):
        cfg = golden_config()
        cfg["s_unit_generators"] = {"11.11.0": [11, 0]}
        with self.assertRaises(FieldError) as ctx:
            make_field_from_config(cfg)
        self.assertIn("not a prime power generator", ctx.exception.message)

    def test_load_from_disk(self):
        path = os.path.join(self.temp_dir, "field.json")
        with open(path, "w") as fh:
            json.dump(golden_config(), fh)
        self.assertEqual(load_field_config(path).label, "2.2.5.1")

    def test_unreadable_file(self):
        with self.assertRaises(FieldError) as ctx:
            load_field_config(os.path.join(self.temp_dir, "missing.json"))
        self.assertIn("cannot read", ctx.exception.message)


class TestFieldConfigRejections(unittest.TestCase):
    """
    Each broken document names the invariant that failed.
    """

    def assertRejected(self, cfg, fragment):
        with self.assertRaises(FieldError) as ctx:
            make_field_from_config(cfg)
        self.assertIn(fragment, ctx.exception.message)

    def test_missing_key(self):
        cfg = golden_config()
        del cfg["units"]
        self.assertRejected(cfg, "missing 'units'")

    def test_unit_count(self):
        cfg = golden_config()
        cfg["units"] = []
        self.assertRejected(cfg, "unit basis must have d-1 elements")

    def test_non_unit(self):
        cfg = golden_config()
        cfg["units"] = [[2, 1]]
        self.assertRejected(cfg, "norm outside")

    def test_not_totally_real(self):
        cfg = golden_config()
        cfg["poly"] = [1, 0, 1]
        self.assertRejected(cfg, "not totally real")

    def test_reducible_polynomial(self):
        cfg = golden_config()
        cfg["poly"] = [1, 0, -1]
        self.assertRejected(cfg, "not irreducible")

    def test_automorphisms_not_closed(self):
        cfg = golden_config()
        cfg["automorphisms"] = [[[1, 0], [0, 1]], [[1, 0], [1, 1]]]
        self.assertRejected(cfg, "do not close under composition")

    def test_too_few_automorphisms(self):
        cfg = golden_config()
        cfg["automorphisms"] = [[[1, 0], [0, 1]]]
        self.assertRejected(cfg, "K must be Galois")

    def test_multiplication_table(self):
        cfg = golden_config()
        cfg["mult_table"] = [[[1, 0], [0, 1]], [[0, 1], [2, 1]]]
        self.assertRejected(cfg, "disagrees with the integral basis")

    def test_prime_norm(self):
        cfg = golden_config()
        cfg["primes"] = [{"hnf": [[1, 4], [0, 11]], "residue_char": 11, "e": 1, "f": 2}]
        self.assertRejected(cfg, "residue_char ** f")

    def test_prime_not_ideal(self):
        cfg = golden_config()
        cfg["primes"] = [{"hnf": [[1, 3], [0, 11]], "residue_char": 11, "e": 1, "f": 1}]
        self.assertRejected(cfg, "not an ideal")

    def test_malformed_prime_entry(self):
        cfg = golden_config()
        cfg["primes"] = [{"hnf": [[1, 4], [0, 11]], "e": 1, "f": 1}]
        self.assertRejected(cfg, "missing 'residue_char'")


if __name__ == '__main__':
    unittest.main()
