"""
Main pipeline module that takes a run configuration through field
construction, thresholds, form acquisition and the elimination sieve to a
written BoundReport.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import field_config, forms, gl2, gl2_verification, numfield
from .characters import enumerate_characters
from .elimination import BoundReport, EliminationSieve, assemble_constant
from .exceptions import ConfigError
from .forms import FormDataset
from .forms_client import FormsClient
from .irreducibility import IrreducibilityBound, irreducibility_threshold
from .levels import LevelData, compute_levels
from .numfield import IntegralIdeal, NumberField
from .report_mapper import ReportMapper
from .run_config import PrimeSpecTranslator, RunConfig
from .worker_pool import WorkerPool

REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"


class SurjectivityPipeline:
    """
    Computes C_{K,S} for one run configuration.
    Owns the worker pool shared by every parallel stage.
    """

    def __init__(self, config: RunConfig):
        """
        Initialize the pipeline.

        Args:
            config: Validated run configuration
        """
        self.config = config
        self.pool = WorkerPool(config.jobs)
        self.report_mapper = ReportMapper()

        self.logger = logging.getLogger(__name__)
        self.logger.debug(f"Pipeline initialized with {config.jobs} job(s)")

    def build_field(self) -> NumberField:
        """
        Construct K from ``--quadratic`` or ``--field``.

        Returns:
            Validated NumberField
        """
        try:
            if self.config.quadratic is not None:
                K = numfield.make_quadratic_field(self.config.quadratic)
            elif self.config.field_path is not None:
                K = field_config.load_field_config(self.config.field_path)
            else:
                raise ConfigError("no field given; use --quadratic or --field")
            self.logger.info(f"Field {K.label}: degree {K.degree}, disc {K.disc}, h = {K.class_number}")
            return K

        except Exception as e:
            self.logger.error(f"Field construction failed: {str(e)}")
            raise

    def resolve_S(self, K: NumberField) -> List[IntegralIdeal]:
        S = PrimeSpecTranslator(K).translate(self.config.s_specs)
        self.logger.info(f"S = {{{', '.join(p.key for p in S)}}}")
        return S

    def acquire_dataset(self, K: NumberField, level: LevelData) -> Optional[FormDataset]:
        """
        Load or fetch the eigenform dataset named by ``--forms``.

        Args:
            K: Base field
            level: Level data; remote requests ask for level norms up to N(M)

        Returns:
            FormDataset, or None for ``--forms none``
        """
        kind, location = self.config.forms_source
        try:
            if kind == "none":
                self.logger.info("No eigenform dataset requested")
                return None
            if kind == "path":
                return forms.load_dataset(location, K)
            client = FormsClient(location, self.config.cache_dir)
            return client.fetch(K.label, level.M_norm, K)

        except Exception as e:
            self.logger.error(f"Failed to acquire forms from {location}: {str(e)}")
            raise

    def compute(self) -> BoundReport:
        """
        Run every stage and assemble the report.

        Returns:
            BoundReport
        """
        K = self.build_field()
        S = self.resolve_S(K)
        irr = irreducibility_threshold(K, S, self.pool)
        level = compute_levels(K, S)
        characters = enumerate_characters(K, S)
        dataset = self.acquire_dataset(K, level)

        notices: List[str] = []
        verdicts = []
        if dataset is not None:
            kept, dropped = forms.forms_of_level_dividing(K, dataset, level.M)
            if dropped:
                notices.append("forms with level not dividing M were skipped: " + ", ".join(dropped))
            verdicts = EliminationSieve(K, S, characters, self.pool).run(kept)

        report = assemble_constant(K, S, irr, level, dataset, verdicts, characters, notices)
        status = "CONDITIONAL" if report.conditional else "UNCONDITIONAL"
        self.logger.info(f"C_K,S = {report.C} [{status}] from {len(report.verdicts)} verdict(s)")
        return report

    def write_report(self, report: BoundReport) -> Tuple[Path, Path]:
        """
        Write ``report.json`` and ``report.txt`` into the output directory.

        Returns:
            Paths of the JSON and text reports
        """
        try:
            document = self.report_mapper.map_report(report)
            out_dir = Path(self.config.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            json_path, text_path = out_dir / REPORT_JSON, out_dir / REPORT_TEXT
            json_path.write_text(self.report_mapper.to_json(document), encoding="utf-8")
            text_path.write_text(self.report_mapper.render_text(document), encoding="utf-8")
            self.logger.info(f"Report written to {json_path}")
            return json_path, text_path

        except Exception as e:
            self.logger.error(f"Failed to write report: {str(e)}")
            raise

    def run(self) -> BoundReport:
        report = self.compute()
        self.write_report(report)
        return report

    def diagnose_bound(self) -> Tuple[NumberField, IrreducibilityBound]:
        """
        B, the pattern table and the threshold for S as configured.
        """
        K = self.build_field()
        S = self.resolve_S(K)
        return K, irreducibility_threshold(K, S, self.pool)

    def verify_gl2(self, primes: Optional[Sequence[int]] = None) -> List[Dict[str, Any]]:
        """
        Run the gl2 verification suite for each prime.

        Args:
            primes: Primes to check (defaults to ``config.gl2_primes``)

        Returns:
            One report per prime, in the given order
        """
        primes = list(self.config.gl2_primes if primes is None else primes)
        for p in primes:
            gl2.check_prime(p, gl2.ENUMERATION_LIMIT)
        reports = []
        for p in primes:
            report = gl2_verification.verify_prime(p, self.config.gl2_trials, self.config.seed, self.pool)
            self.logger.info(f"gl2 checks at p={p}: {'passed' if report['passed'] else 'FAILED'}")
            reports.append(report)
        return reports

    def close(self) -> None:
        self.pool.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
