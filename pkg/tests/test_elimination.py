"""
Tests for the elimination sieve, verdict rechecks and the assembled constant.
"""

import unittest
from dataclasses import replace
from math import prod

from surjectivity_bound import elimination, numfield
from surjectivity_bound.characters import enumerate_characters
from surjectivity_bound.elimination import EliminationSieve, assemble_constant, recheck_verdict
from surjectivity_bound.exceptions import DatasetError
from surjectivity_bound.forms import dataset_from_dict
from surjectivity_bound.irreducibility import irreducibility_threshold
from surjectivity_bound.levels import compute_levels
from surjectivity_bound.worker_pool import WorkerPool

from tests import fixtures


class EliminationTestCase(unittest.TestCase):
    """
    Shared Q(sqrt 5) setup with an empty S.
    """

    def setUp(self):
        self.K = numfield.make_quadratic_field(5)
        self.S = []
        self.characters = enumerate_characters(self.K, self.S)

    def record(self, raw):
        return dataset_from_dict(fixtures.document(raw), self.K).records[0]


class TestNonrationalForms(EliminationTestCase):
    """
    Test cases for nonrational_form_bound.
    """

    def test_product_bound(self):
        verdict = elimination.nonrational_form_bound(self.record(fixtures.nonrational_form()), self.S, self.K)
        self.assertEqual(verdict.outcome, elimination.ELIMINATED_NONRATIONAL)
        self.assertEqual(verdict.witness["t_bound"], 6)
        self.assertEqual(verdict.witness["good_reduction_factors"], fixtures.NONRATIONAL_FACTORS)
        self.assertEqual(verdict.witness["multiplicative_factors"], [119, 167])
        self.assertEqual(verdict.contribution, abs(prod(fixtures.NONRATIONAL_FACTORS)))
        self.assertTrue(recheck_verdict(verdict))

    def test_prime_in_S_is_skipped(self):
        f = self.record(fixtures.nonrational_form())
        verdict = elimination.nonrational_form_bound(f, [numfield.prime_by_key(self.K, "11.11.0")], self.K)
        self.assertEqual(verdict.outcome, elimination.INCONCLUSIVE)
        self.assertEqual(verdict.contribution, 0)

    def test_rational_eigenvalues_are_skipped(self):
        verdict = elimination.nonrational_form_bound(
            self.record(fixtures.nonrational_at_nineteen_form()), self.S, self.K
        )
        self.assertEqual(verdict.witness["prime"], "19.19.0")
        self.assertEqual(verdict.witness["good_reduction_factors"], fixtures.NINETEEN_FACTORS)
        self.assertEqual(verdict.witness["multiplicative_factors"], [359, 439])

    def test_unknown_prime_key(self):
        raw = fixtures.form("2.2.5.1-1.1-s", {"7.7.0": [1, 1]}, hecke_poly=(1, 0, -2))
        f = dataset_from_dict(fixtures.document(raw)).records[0]
        with self.assertRaises(DatasetError) as ctx:
            elimination.nonrational_form_bound(f, self.S, self.K)
        self.assertEqual(ctx.exception.diagnostic["key"], "7.7.0")

    def test_rejects_rational_hecke_field(self):
        with self.assertRaises(DatasetError):
            elimination.nonrational_form_bound(self.record(fixtures.rational_mismatch_form()), self.S, self.K)


class TestRationalForms(EliminationTestCase):
    """
    Test cases for rational_form_analysis.
    """

    def analyse(self, raw, S=None):
        return elimination.rational_form_analysis(
            self.record(raw), self.characters.characters, self.S if S is None else S, self.K
        )

    def test_twist_mismatch(self):
        verdict = self.analyse(fixtures.rational_mismatch_form())
        self.assertEqual(verdict.outcome, elimination.ELIMINATED_TWIST_MISMATCH)
        self.assertEqual(verdict.contribution, 135)
        cases = [entry["cases"] for entry in verdict.witness["characters"]]
        self.assertEqual(cases, [[11, 6, 135]] * 3)
        self.assertEqual([entry["prime"] for entry in verdict.witness["characters"]], ["11.11.1", "11.11.0", "11.11.0"])
        self.assertTrue(recheck_verdict(verdict))

    def test_cm_survivor(self):
        verdict = self.analyse(fixtures.cm_form())
        self.assertEqual(verdict.outcome, elimination.SURVIVES_CM)
        self.assertEqual(verdict.character, "eps1")
        self.assertEqual(verdict.coverage, 19)
        self.assertEqual(verdict.contribution, 0)

    def test_data_exhausted(self):
        verdict = self.analyse(fixtures.exhausted_form())
        self.assertEqual(verdict.outcome, elimination.INCONCLUSIVE)
        self.assertEqual(verdict.contribution, 0)
        self.assertIn("data exhausted for character(s): eps1, -1, -1*eps1", verdict.warnings)

    def test_degenerate_data_survives_every_twist(self):
        raw = fixtures.form("2.2.5.1-1.1-z", {"11.11.0": [0], "11.11.1": [0]})
        verdict = self.analyse(raw)
        self.assertEqual(verdict.outcome, elimination.SURVIVES_CM)
        self.assertEqual(verdict.character, "eps1")
        self.assertEqual([entry["status"] for entry in verdict.witness["characters"]], ["cm"] * 3)
        self.assertIn("degenerate data: every stored eigenvalue is zero", verdict.warnings)

    def test_no_mismatch_without_minus_one(self):
        # every character is +1 at 29.29.0
        verdict = self.analyse(fixtures.form("2.2.5.1-1.1-z", {"29.29.0": [0]}))
        self.assertEqual(verdict.outcome, elimination.SURVIVES_CM)
        self.assertEqual(verdict.coverage, 29)
        self.assertEqual(verdict.contribution, 0)

    def test_no_characters(self):
        verdict = elimination.rational_form_analysis(self.record(fixtures.cm_form()), [], self.S, self.K)
        self.assertEqual(verdict.outcome, elimination.INCONCLUSIVE)

    def test_rejects_nonrational_hecke_field(self):
        with self.assertRaises(DatasetError):
            self.analyse(fixtures.nonrational_form())


class TestRecheck(EliminationTestCase):
    """
    Tampered witnesses fail the recheck.
    """

    def test_tampered_contribution(self):
        verdict = elimination.nonrational_form_bound(self.record(fixtures.nonrational_form()), self.S, self.K)
        self.assertFalse(recheck_verdict(replace(verdict, contribution=verdict.contribution + 1)))

    def test_tampered_factor(self):
        verdict = elimination.nonrational_form_bound(self.record(fixtures.nonrational_form()), self.S, self.K)
        witness = dict(verdict.witness)
        witness["good_reduction_factors"] = [0] + witness["good_reduction_factors"][1:]
        self.assertFalse(recheck_verdict(replace(verdict, witness=witness)))

    def test_tampered_case(self):
        verdict = elimination.rational_form_analysis(
            self.record(fixtures.rational_mismatch_form()), self.characters.characters, self.S, self.K
        )
        entries = [dict(entry) for entry in verdict.witness["characters"]]
        entries[0]["cases"] = [11, 6, 134]
        self.assertFalse(recheck_verdict(replace(verdict, witness={"characters": entries})))

    def test_other_outcomes_pass(self):
        verdict = elimination.rational_form_analysis(
            self.record(fixtures.cm_form()), self.characters.characters, self.S, self.K
        )
        self.assertTrue(recheck_verdict(verdict))

    def test_twist_case_values(self):
        self.assertEqual(elimination.twist_case_values(3, 11), (11, 6, 135))
        self.assertEqual(elimination.twist_case_values(-4, 19), (19, 8, 384))


class TestSieveAndAssembly(EliminationTestCase):
    """
    Test cases for EliminationSieve and assemble_constant.
    """

    def setUp(self):
        super().setUp()
        doc = fixtures.document(
            fixtures.nonrational_form(),
            fixtures.rational_mismatch_form(),
            fixtures.cm_form(),
            fixtures.exhausted_form(),
        )
        self.dataset = dataset_from_dict(doc, self.K)
        self.irr = irreducibility_threshold(self.K, self.S)
        self.level = compute_levels(self.K, self.S)

    def test_verdicts_in_label_order(self):
        verdicts = EliminationSieve(self.K, self.S, self.characters).run(list(reversed(self.dataset.records)))
        self.assertEqual([v.label for v in verdicts], sorted(r.label for r in self.dataset.records))

    def test_pool_matches_inline(self):
        inline = EliminationSieve(self.K, self.S, self.characters).run(self.dataset.records)
        with WorkerPool(4) as pool:
            threaded = EliminationSieve(self.K, self.S, self.characters, pool).run(self.dataset.records)
        self.assertEqual(inline, threaded)

    def test_assembled_report(self):
        verdicts = EliminationSieve(self.K, self.S, self.characters).run(self.dataset.records)
        report = assemble_constant(self.K, self.S, self.irr, self.level, self.dataset, verdicts, self.characters)
        self.assertEqual(report.C, abs(prod(fixtures.NONRATIONAL_FACTORS)))
        self.assertTrue(report.conditional)
        self.assertEqual(report.surviving, (("2.2.5.1-1.1-cm", "eps1"),))
        self.assertEqual(len(report.missing_data), 1)
        self.assertTrue(report.missing_data[0].startswith("2.2.5.1-1.1-x: "))
        self.assertIn(elimination.GALOIS_NOTICE, report.notices)
        self.assertIn(elimination.CM_NOTICE, report.notices)
        self.assertEqual(report.characters, ("eps1", "-1", "-1*eps1"))
        self.assertEqual(report.dataset["records"], 4)

    def test_no_forms(self):
        report = assemble_constant(self.K, self.S, self.irr, self.level, None, [], self.characters)
        self.assertEqual(report.C, 531442)
        self.assertFalse(report.conditional)
        self.assertEqual(report.notices, (elimination.GALOIS_NOTICE,))
        self.assertEqual(report.field_summary["unit_norms"], [-1])
        self.assertEqual(report.dataset, {})


if __name__ == '__main__':
    unittest.main()
