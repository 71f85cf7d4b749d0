import os
import sys
import json
import argparse
from pathlib import Path
from datetime import datetime

# add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.utils.config_utils import DEFAULT_TOLERANCES, default_output_dir, find_latest_report
from src.verification.suite_factory import SuiteFactory


def load_results(results_file):
    """Load a suite report from a JSON file."""
    with open(results_file, 'r') as f:
        return json.load(f)


def _format_residual(value):
    if value is None:
        return "n/a"
    if isinstance(value, str):
        return value
    return f"{value:.3e}"


def _tolerance_of(report):
    name = report.get("tolerance_name", "")
    overrides = {key.replace("-", "_"): value
                 for key, value in report.get("config", {}).get("tolerance_overrides", {}).items()}
    if name in overrides:
        return overrides[name]
    return getattr(DEFAULT_TOLERANCES, name, None)


def collect_reports(reports_dir=None, suite_names=None):
    """
    Latest report of every suite found in reports_dir, keyed by suite name.
    """
    if suite_names is None:
        suite_names = SuiteFactory.available_suites()
    reports = {}
    for name in suite_names:
        report_file = find_latest_report(name, reports_dir)
        if report_file is not None:
            reports[name] = load_results(report_file)
    return reports


def generate_report(reports, output_file=None):
    """
    Write a markdown summary of suite reports.

    Args:
        reports: dict suite name -> report dict as written by the framework
        output_file: markdown path (default: timestamped file next to the reports)
    """
    if output_file is None:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        output_file = os.path.join(default_output_dir(), f"verification_summary_{timestamp}.md")

    directory = os.path.dirname(output_file)
    if directory:
        os.makedirs(directory, exist_ok=True)

    report = []
    report.append("# Contraction Calculus Verification Summary")
    report.append(f"*Generated on: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}*\n")

    report.append("## Suites")
    report.append("| Suite | Cases | Passed | Max residual | Tolerance | Result | Digest |")
    report.append("|-------|-------|--------|--------------|-----------|--------|--------|")
    for name, data in reports.items():
        summary = data.get("summary", {})
        tolerance = _tolerance_of(data)
        tolerance_text = f"{tolerance:.1e}" if tolerance is not None else "n/a"
        result = "PASS" if summary.get("pass") else "FAIL"
        report.append(f"| {name} | {summary.get('cases', 0)} | {summary.get('passed', 0)} | "
                      f"{_format_residual(summary.get('max_residual'))} | {tolerance_text} | "
                      f"{result} | `{data.get('digest', '')}` |")
    report.append("")

    failing = {name: data for name, data in reports.items() if not data.get("summary", {}).get("pass")}
    if failing:
        report.append("## Failures")
        for name, data in failing.items():
            report.append(f"### {name}")
            for case in data.get("cases", []):
                if not case.get("passed"):
                    report.append(f"- case {case['case_id']}: residual {_format_residual(case['residual'])} "
                                  f"(dim {case['dim']}, degree {case['degree']})")
            for check in data.get("checks", []):
                if not check.get("passed"):
                    report.append(f"- check {check['name']}: {_format_residual(check['value'])} "
                                  f"above {check['tolerance']:.1e}")
            report.append("")

    seeds = sorted({data.get("config", {}).get("seed") for data in reports.values()} - {None})
    if seeds:
        report.append("## Configuration")
        report.append(f"- Seeds: {', '.join(str(seed) for seed in seeds)}")
        report.append(f"- Suites found: {len(reports)}, passing: {len(reports) - len(failing)}")
        report.append("")

    with open(output_file, 'w') as f:
        f.write('\n'.join(report))

    print(f"Report generated and saved to: {output_file}")
    return output_file


def main(argv=None):
    """Run the report generation as a script."""
    parser = argparse.ArgumentParser(description='Summarise the latest verification suite reports')
    parser.add_argument('--reports-dir', type=str, default=None,
                        help='Directory holding <suite>_report_<timestamp>.json files')
    parser.add_argument('--output', type=str, default=None,
                        help='Path to save the generated markdown')
    args = parser.parse_args(argv)

    if args.reports_dir is not None and not os.path.isdir(args.reports_dir):
        print(f"Error: Reports directory not found: {args.reports_dir}")
        return 1

    reports = collect_reports(args.reports_dir)
    if not reports:
        print("Error: No suite reports found")
        return 1

    generate_report(reports, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
