"""
Command-line interface for the surjectivity bound pipeline.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import Any, List, Optional

from . import __version__
from .exceptions import ConfigError, SurjectivityBoundError
from .levels import compute_levels
from .pipeline import SurjectivityPipeline
from .report_mapper import ReportMapper
from .run_config import RunConfig

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONDITIONAL = 2


def setup_logging(verbose: bool = False) -> None:
    """
    Set up logging configuration.

    Args:
        verbose: Enable verbose logging
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def _add_field_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--quadratic', type=int, metavar='M', help='Real quadratic field Q(sqrt M)')
    group.add_argument('--field', dest='field_path', metavar='PATH', help='Field-description document')
    parser.add_argument('--S', dest='s_specs', metavar='SPECS', help='Primes of S, e.g. 2,11.0')


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', metavar='PATH', help='JSON run-config file; flags override it')
    parser.add_argument('--jobs', type=int, help='Worker threads (default 1)')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='surjectivity-bound',
        description="Effective surjectivity bound C_K,S for elliptic curves over totally real Galois fields",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  surjectivity-bound run --quadratic 5 --forms none
  surjectivity-bound run --quadratic 5 --S 2,11.0 --forms data.json --out reports/
  surjectivity-bound diag-bound --quadratic 2
  surjectivity-bound diag-gl2 --gl2-primes 5,7 --trials 1000 --seed 1
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command')

    run = commands.add_parser('run', help='Compute C_K,S and write report.json and report.txt')
    _add_field_arguments(run)
    run.add_argument('--forms', metavar='SOURCE', help='Dataset path, base URL, "remote" or "none"')
    run.add_argument('--cache', dest='cache_dir', metavar='DIR', help='Forms cache directory')
    run.add_argument('--out', dest='out_dir', metavar='DIR', help='Report directory')
    _add_common_arguments(run)

    gl2 = commands.add_parser('diag-gl2', help='Verify the GL2(F_p) subgroup claims')
    gl2.add_argument('--gl2-primes', dest='gl2_primes', metavar='LIST', help='Primes, e.g. 3,5,7')
    gl2.add_argument('--trials', dest='gl2_trials', type=int, help='Random subgroups per prime')
    gl2.add_argument('--seed', type=int, help='Random seed')
    _add_common_arguments(gl2)

    bound = commands.add_parser('diag-bound', help='Print B, the pattern table and the threshold')
    _add_field_arguments(bound)
    _add_common_arguments(bound)

    fetch = commands.add_parser('fetch-forms', help='Fetch and cache the remote dataset for a field')
    _add_field_arguments(fetch)
    fetch.add_argument('--forms', metavar='SOURCE', help='Base URL or "remote"')
    fetch.add_argument('--cache', dest='cache_dir', metavar='DIR', help='Forms cache directory')
    fetch.add_argument('--level-norm', type=int, metavar='N', help='Level norm bound (default N(M))')
    _add_common_arguments(fetch)

    validate = commands.add_parser('validate-config', help='Check a field description and/or run config')
    _add_field_arguments(validate)
    _add_common_arguments(validate)
    return parser


def _emit(document: Any) -> None:
    print(json.dumps(ReportMapper().map_results([document])[0], sort_keys=True, indent=2))


def _command_run(config: RunConfig) -> int:
    with SurjectivityPipeline(config) as pipeline:
        report = pipeline.run()
    print(f"C_K,S = {report.C} [{'CONDITIONAL' if report.conditional else 'UNCONDITIONAL'}]")
    return EXIT_CONDITIONAL if report.conditional else EXIT_OK


def _command_diag_gl2(config: RunConfig) -> int:
    with SurjectivityPipeline(config) as pipeline:
        reports = pipeline.verify_gl2()
    _emit(reports)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_ERROR


def _command_diag_bound(config: RunConfig) -> int:
    with SurjectivityPipeline(config) as pipeline:
        K, irr = pipeline.diagnose_bound()
    _emit({"field": K.label, "irreducibility": irr})
    return EXIT_OK


def _command_fetch_forms(config: RunConfig, level_norm: Optional[int]) -> int:
    kind, _ = config.forms_source
    if kind not in ("url", "remote"):
        raise ConfigError('fetch-forms needs --forms <base URL> or --forms remote')
    with SurjectivityPipeline(config) as pipeline:
        K = pipeline.build_field()
        level = compute_levels(K, pipeline.resolve_S(K))
        if level_norm is not None:
            level = replace(level, M_norm=level_norm)
        dataset = pipeline.acquire_dataset(K, level)
    _emit({"field": dataset.field_label, "records": len(dataset.records), "provenance": dataset.provenance})
    return EXIT_OK


def _command_validate(config: RunConfig) -> int:
    checked: List[str] = []
    if config.quadratic is not None or config.field_path is not None:
        with SurjectivityPipeline(config) as pipeline:
            K = pipeline.build_field()
            S = pipeline.resolve_S(K)
        checked.append(f"field {K.label}")
        checked.append(f"S = {{{', '.join(p.key for p in S)}}}")
    print("OK" + (": " + "; ".join(checked) if checked else ""))
    return EXIT_OK


def run_command(args: argparse.Namespace) -> int:
    """
    Execute one parsed subcommand.

    Returns:
        Exit code
    """
    config = RunConfig.from_args(args)
    if args.command == 'run':
        return _command_run(config)
    if args.command == 'diag-gl2':
        return _command_diag_gl2(config)
    if args.command == 'diag-bound':
        return _command_diag_bound(config)
    if args.command == 'fetch-forms':
        return _command_fetch_forms(config, args.level_norm)
    return _command_validate(config)


def main(argv: Optional[List[str]] = None) -> None:
    """
    Main command-line entry point.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors exit 1; 2 is reserved for conditional results
        sys.exit(EXIT_OK if e.code in (0, None) else EXIT_ERROR)

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_OK)

    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)

    try:
        logger.debug(f"Running {args.command}")
        code = run_command(args)

    except SurjectivityBoundError as e:
        logger.error(f"Error in CLI: {e.message}")
        print(json.dumps(e.to_dict(), sort_keys=True), file=sys.stderr)
        code = EXIT_ERROR

    except Exception as e:
        logger.error(f"Error in CLI: {str(e)}")
        print(json.dumps({"error": type(e).__name__, "message": str(e), "diagnostic": {}}, sort_keys=True), file=sys.stderr)
        code = EXIT_ERROR

    sys.exit(code)


if __name__ == "__main__":
    main()
