"""
Tests for the command-line interface and its exit codes.
"""

import io
import json
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from surjectivity_bound import cli

from tests import fixtures
from tests.test_field_config import golden_config


class TestCLI(unittest.TestCase):
    """
    Test cases for cli.main.
    """

    def setUp(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def invoke(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with patch("sys.stdout", stdout), patch("sys.stderr", stderr):
            with self.assertRaises(SystemExit) as ctx:
                cli.main(list(argv))
        return ctx.exception.code, stdout.getvalue(), stderr.getvalue()

    def test_run_unconditional(self):
        out = self.temp_dir / "out"
        code, stdout, _ = self.invoke("run", "--quadratic", "5", "--forms", "none", "--out", str(out))
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("C_K,S = 531442 [UNCONDITIONAL]", stdout)
        self.assertTrue((out / "report.json").exists())
        self.assertTrue((out / "report.txt").exists())

    def test_run_conditional(self):
        dataset = self.temp_dir / "forms.json"
        dataset.write_text(json.dumps(fixtures.document(fixtures.exhausted_form())))
        code, stdout, _ = self.invoke(
            "run", "--quadratic", "5", "--forms", str(dataset), "--out", str(self.temp_dir / "out")
        )
        self.assertEqual(code, cli.EXIT_CONDITIONAL)
        self.assertIn("[CONDITIONAL]", stdout)

    def test_invalid_S(self):
        code, _, stderr = self.invoke("run", "--quadratic", "5", "--S", "4", "--out", str(self.temp_dir))
        self.assertEqual(code, cli.EXIT_ERROR)
        error = json.loads(stderr.strip().splitlines()[-1])
        self.assertEqual(error["error"], "ConfigError")
        self.assertEqual(error["message"], "S entry does not name a rational prime")

    def test_not_squarefree(self):
        code, _, stderr = self.invoke("run", "--quadratic", "4", "--out", str(self.temp_dir))
        self.assertEqual(code, cli.EXIT_ERROR)
        self.assertIn("not squarefree", stderr)

    def test_invalid_gl2_prime(self):
        for prime in ("2", "4"):
            with self.subTest(prime=prime):
                code, _, stderr = self.invoke("diag-gl2", "--gl2-primes", prime, "--trials", "1")
                self.assertEqual(code, cli.EXIT_ERROR)
                self.assertIn("GroupError", stderr)

    def test_non_galois_field(self):
        cfg = golden_config()
        cfg["automorphisms"] = cfg["automorphisms"][:1]
        path = self.temp_dir / "field.json"
        path.write_text(json.dumps(cfg))
        code, _, stderr = self.invoke("diag-bound", "--field", str(path))
        self.assertEqual(code, cli.EXIT_ERROR)
        self.assertIn("K must be Galois", stderr)

    def test_diag_gl2(self):
        code, stdout, _ = self.invoke("diag-gl2", "--gl2-primes", "3", "--trials", "10", "--seed", "3")
        self.assertEqual(code, cli.EXIT_OK)
        reports = json.loads(stdout)
        self.assertEqual(reports[0]["p"], "3")
        self.assertTrue(reports[0]["passed"])

    def test_diag_bound(self):
        code, stdout, _ = self.invoke("diag-bound", "--quadratic", "5")
        self.assertEqual(code, cli.EXIT_OK)
        document = json.loads(stdout)
        self.assertEqual(document["irreducibility"]["B"], "320")
        self.assertEqual(document["irreducibility"]["threshold"], "531442")

    def test_validate_config(self):
        code, stdout, _ = self.invoke("validate-config", "--quadratic", "5", "--S", "2,11.1")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(stdout.strip(), "OK: field 2.2.5.1; S = {2.4.0, 11.11.1}")

    def test_fetch_forms_needs_remote_source(self):
        code, _, stderr = self.invoke("fetch-forms", "--quadratic", "5", "--forms", "none")
        self.assertEqual(code, cli.EXIT_ERROR)
        self.assertIn("fetch-forms needs", stderr)

    def test_run_takes_no_seed(self):
        code, _, stderr = self.invoke("run", "--quadratic", "5", "--seed", "1")
        self.assertEqual(code, cli.EXIT_ERROR)
        self.assertIn("unrecognized arguments: --seed 1", stderr)

    def test_no_command_prints_help(self):
        code, stdout, _ = self.invoke()
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("surjectivity-bound", stdout)


if __name__ == '__main__':
    unittest.main()
