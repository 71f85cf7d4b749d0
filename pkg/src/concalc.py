import argparse
import json
import logging
import sys
from pathlib import Path

# add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.functions.analytic import eval_on_contraction, eval_via_dilation
from src.functions.besov import besov_norm
from src.utils.config_utils import SuiteConfig, parse_range, parse_tolerance
from src.utils.errors import ConcalcError
from src.utils.serialization import (analytic_from_json, load_json, matrix_from_json,
                                     matrix_to_json, trig_from_json)
from src.verification.framework import VerificationFramework
from src.verification.suite_factory import SuiteFactory

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _suite_options():
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument('--seed', type=int, default=42,
                         help='Global seed fixing every case')
    options.add_argument('--dims', type=str, default='1..6',
                         help='Matrix dimension range A..B')
    options.add_argument('--degrees', type=str, default='1..10',
                         help='Polynomial degree range A..B')
    options.add_argument('--cases', type=int, default=200,
                         help='Number of random cases')
    options.add_argument('--tol', type=str, action='append', default=[],
                         metavar='NAME=VALUE', help='Override a named tolerance (repeatable)')
    options.add_argument('--out', type=str, default=None,
                         help='Path of the JSON report')
    options.add_argument('--csv', type=str, default=None,
                         help='Path of a per-case CSV report')
    return options


def build_parser():
    parser = argparse.ArgumentParser(
        prog='concalc',
        description='Functional calculus of contractions: verification suites and tools')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    suite_options = _suite_options()
    for name in SuiteFactory.available_suites():
        suite_class = SuiteFactory.SUITES[name]
        commands.add_parser(name, parents=[suite_options], help=suite_class.description)
    commands.add_parser('all', parents=[suite_options], help='Run every suite in turn')

    evaluate = commands.add_parser('eval', help='Print phi(T) for a polynomial and a contraction')
    evaluate.add_argument('--phi', type=str, required=True, help='AnalyticFunction JSON file')
    evaluate.add_argument('--t', type=str, required=True, help='Matrix JSON file')
    evaluate.add_argument('--method', choices=['horner', 'dilation'], default='horner',
                          help='Evaluation route')

    besov = commands.add_parser('besov-norm', help='Besov norm of a trigonometric polynomial')
    besov.add_argument('--phi', type=str, required=True, help='TrigPolynomial JSON file')
    besov.add_argument('--s', type=float, default=1.0, help='Smoothness s')
    besov.add_argument('--p', type=str, default='inf', help='Integrability p in [1, inf]')
    besov.add_argument('--q', type=str, default='1', help='Summability q in [1, inf]')
    besov.add_argument('--grid', type=int, default=None, help='Quadrature grid size')
    return parser


def suite_config_from_args(args):
    overrides = dict(parse_tolerance(text) for text in args.tol)
    return SuiteConfig(seed=args.seed, dims=parse_range(args.dims),
                       degrees=parse_range(args.degrees), cases=args.cases,
                       tolerance_overrides=overrides)


def run_suites(args):
    config = suite_config_from_args(args)
    framework = VerificationFramework()
    if args.command == 'all':
        if args.out or args.csv:
            print("Note: --out and --csv apply to single suites; 'all' writes timestamped reports")
        reports = framework.run_suites(SuiteFactory.available_suites(), config)
    else:
        reports = {args.command: framework.run_suite(args.command, config,
                                                     out=args.out, csv_path=args.csv)}

    if len(reports) > 1:
        print(f"\n{'='*80}")
        print("Overall summary:")
        print(f"{'='*80}")
        for name, report in reports.items():
            print(f"  {name:<14} {'PASS' if report.passed else 'FAIL'}  "
                  f"{report.pass_count}/{len(report.records)}  max residual {report.max_residual:.3e}")
    return EXIT_PASS if all(report.passed for report in reports.values()) else EXIT_FAIL


def run_eval(args):
    phi = analytic_from_json(load_json(args.phi))
    T = matrix_from_json(load_json(args.t))
    if args.method == 'dilation':
        value = eval_via_dilation(phi, T)
    else:
        value = eval_on_contraction(phi, T)
    print(json.dumps(matrix_to_json(value), indent=2))
    return EXIT_PASS


def run_besov_norm(args):
    phi = trig_from_json(load_json(args.phi))
    print(f"{besov_norm(phi, args.s, args.p, args.q, args.grid):.15g}")
    return EXIT_PASS


def main(argv=None):
    """Entry point of the concalc command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        if args.command == 'eval':
            return run_eval(args)
        if args.command == 'besov-norm':
            return run_besov_norm(args)
        return run_suites(args)
    except (ConcalcError, OSError) as exc:
        print(f"concalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
