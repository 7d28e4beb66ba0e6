"""
End-to-end tests for the surjectivity pipeline over Q(sqrt 5).
"""

import json
import shutil
import tempfile
import unittest
from math import prod
from pathlib import Path
from unittest.mock import MagicMock, patch

from surjectivity_bound.elimination import ELIMINATED_NONRATIONAL
from surjectivity_bound.exceptions import ConfigError
from surjectivity_bound.pipeline import REPORT_JSON, REPORT_TEXT, SurjectivityPipeline
from surjectivity_bound.run_config import RunConfig

from tests import fixtures


class PipelineTestCase(unittest.TestCase):
    """
    Temporary output and dataset directories.
    """

    def setUp(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def write_dataset(self, *forms):
        path = self.temp_dir / "forms.json"
        path.write_text(json.dumps(fixtures.document(*forms)))
        return str(path)

    def run_pipeline(self, out="out", **values):
        values.setdefault("quadratic", 5)
        config = RunConfig(out_dir=str(self.temp_dir / out), cache_dir=str(self.temp_dir / "cache"), **values)
        config.validate()
        with SurjectivityPipeline(config) as pipeline:
            return pipeline.run()


class TestPipelineRun(PipelineTestCase):
    """
    Test cases for SurjectivityPipeline.run.
    """

    def test_no_forms(self):
        report = self.run_pipeline(forms="none")
        self.assertEqual(report.C, 531442)
        self.assertFalse(report.conditional)
        document = json.loads((self.temp_dir / "out" / REPORT_JSON).read_text())
        self.assertEqual(document["C_K_S"], "531442")
        self.assertEqual(document["irreducibility"]["B"], "320")
        text = (self.temp_dir / "out" / REPORT_TEXT).read_text()
        self.assertTrue(text.startswith("C_K,S = 531442"))

    def test_constant_is_monotone_in_S(self):
        """
        Test that enlarging S never lowers C while M grows.
        """
        path = self.write_dataset(fixtures.nonrational_at_nineteen_form(), fixtures.steady_rational_form())
        results = []
        for i, specs in enumerate([(), ("2",), ("2", "11.0")]):
            report = self.run_pipeline(out=f"out{i}", forms=path, s_specs=specs)
            results.append(report)
        self.assertEqual([r.level.M_norm for r in results], [1, 65536, 65536 * 121])
        constants = [r.C for r in results]
        self.assertEqual(constants, sorted(constants))
        self.assertEqual(constants[0], abs(prod(fixtures.NINETEEN_FACTORS)))
        for report in results:
            verdict = next(v for v in report.verdicts if v.label == "2.2.5.1-1.1-t")
            self.assertEqual(verdict.outcome, ELIMINATED_NONRATIONAL)

    def test_report_independent_of_jobs(self):
        path = self.write_dataset(
            fixtures.nonrational_form(),
            fixtures.rational_mismatch_form(),
            fixtures.cm_form(),
            fixtures.exhausted_form(),
            fixtures.steady_rational_form(),
        )
        self.run_pipeline(out="serial", forms=path, s_specs=("2",), jobs=1)
        self.run_pipeline(out="threaded", forms=path, s_specs=("2",), jobs=8)
        serial = (self.temp_dir / "serial" / REPORT_JSON).read_bytes()
        threaded = (self.temp_dir / "threaded" / REPORT_JSON).read_bytes()
        self.assertEqual(serial, threaded)

    def test_conditional_when_data_runs_out(self):
        path = self.write_dataset(fixtures.exhausted_form())
        report = self.run_pipeline(forms=path)
        self.assertTrue(report.conditional)
        self.assertEqual(report.C, 531442)

    def test_level_not_dividing_M_is_skipped(self):
        path = self.write_dataset(fixtures.cm_form(), fixtures.eleven_level_form())
        report = self.run_pipeline(forms=path)
        self.assertEqual([v.label for v in report.verdicts], ["2.2.5.1-1.1-cm"])
        self.assertIn("forms with level not dividing M were skipped: 2.2.5.1-11.1-a", report.notices)

    def test_level_dividing_M_is_kept(self):
        path = self.write_dataset(fixtures.cm_form(), fixtures.eleven_level_form())
        report = self.run_pipeline(forms=path, s_specs=("11.0",))
        self.assertEqual(len(report.verdicts), 2)

    @patch("surjectivity_bound.forms_client.requests.get")
    def test_remote_request_uses_level_norm(self, mock_get):
        mock_response = MagicMock()
        mock_response.status_code = 200
        mock_response.json.return_value = fixtures.document(fixtures.cm_form())
        mock_get.return_value = mock_response

        report = self.run_pipeline(forms="https://forms.example.test/api", s_specs=("2",))
        _, kwargs = mock_get.call_args
        self.assertEqual(kwargs["params"]["level_norm_le"], 65536)
        self.assertEqual(report.surviving, (("2.2.5.1-1.1-cm", "pi[2.4.0]"),))

    def test_missing_field(self):
        with self.assertRaises(ConfigError):
            self.run_pipeline(quadratic=None, forms="none")


class TestPipelineDiagnostics(PipelineTestCase):
    """
    Test cases for the diagnostic entry points.
    """

    def test_diagnose_bound(self):
        with SurjectivityPipeline(RunConfig(quadratic=5)) as pipeline:
            K, irr = pipeline.diagnose_bound()
        self.assertEqual(K.label, "2.2.5.1")
        self.assertEqual(irr.B, 320)
        self.assertEqual(irr.threshold, 531442)

    def test_verify_gl2(self):
        with SurjectivityPipeline(RunConfig(gl2_primes=(3, 5), gl2_trials=20, seed=7)) as pipeline:
            reports = pipeline.verify_gl2()
        self.assertEqual([r["p"] for r in reports], [3, 5])
        self.assertTrue(all(r["passed"] for r in reports))


if __name__ == '__main__':
    unittest.main()
