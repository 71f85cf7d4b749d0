import json
import logging
import os
import time
from datetime import datetime

from tqdm import tqdm

from src.utils.config_utils import SuiteConfig, default_output_dir
from src.utils.errors import ConcalcError
from src.verification.suite import SuiteReport, emit_csv
from src.verification.suite_factory import SuiteFactory

logger = logging.getLogger(__name__)


class VerificationFramework:
    """
    Runs verification suites case by case and writes their JSON reports.
    """
    def __init__(self, output_dir=None, progress=True):
        if output_dir is None:
            output_dir = default_output_dir()
        self.output_dir = output_dir
        self.progress = progress

    def run_suite(self, suite_name, config=None, out=None, csv_path=None):
        """
        Run one suite and write its report.

        Args:
            suite_name: name accepted by SuiteFactory
            config: SuiteConfig (defaults when None)
            out: report path (default: timestamped file in output_dir)
            csv_path: optional per-case CSV path
        """
        if config is None:
            config = SuiteConfig()
        suite = SuiteFactory.create_suite(suite_name, config)

        print(f"\n{'='*80}")
        print(f"Running suite: {suite_name} ({suite.description})")
        print(f"Seed {config.seed}, dims {config.dims[0]}..{config.dims[1]}, "
              f"degrees {config.degrees[0]}..{config.degrees[1]}, {config.cases} cases")
        print(f"{'='*80}")

        start = time.time()
        records = []
        for case_id in tqdm(range(config.cases), desc=suite_name, disable=not self.progress):
            try:
                records.append(suite.run_case(case_id, suite.generator.rng(case_id)))
            except (ConcalcError, ArithmeticError) as exc:
                logger.warning("suite %s: case %d raised %s: %s",
                               suite_name, case_id, type(exc).__name__, exc)
                records.append(suite.error_record(case_id, exc))
        checks = suite.suite_checks()
        extras = suite.extras()

        report = SuiteReport(suite=suite_name, config=config.to_dict(),
                             tolerance_name=suite.tolerance_name, records=records,
                             checks=checks, extras=extras, wall_time=time.time() - start)

        self.print_summary(report, suite.tolerance)
        report_path = self.save_report(report, out)
        print(f"\nReport saved to: {report_path}")
        if csv_path:
            emit_csv(report, csv_path)
            print(f"CSV saved to: {csv_path}")
        return report

    def run_suites(self, suite_names, config=None):
        return {name: self.run_suite(name, config) for name in suite_names}

    def save_report(self, report, out=None):
        if out is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            out = os.path.join(self.output_dir, f"{report.suite}_report_{timestamp}.json")
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, "w") as f:
            json.dump(report.to_dict(), f, indent=2)
        return out

    @staticmethod
    def print_summary(report, tolerance):
        failed = [r for r in report.records if not r.passed]
        print(f"  Cases passed: {report.pass_count}/{len(report.records)}")
        print(f"  Max residual: {report.max_residual:.3e} (tolerance {tolerance:.1e})")
        for check in report.checks:
            status = "ok" if check.passed else "FAILED"
            print(f"  Check {check.name}: {check.value:.3e} [{status}]")
        for record in failed[:5]:
            print(f"  Failed case {record.case_id}: residual {record.residual:.3e}, "
                  f"dim {record.dim}, degree {record.degree}")
        if len(failed) > 5:
            print(f"  ... and {len(failed) - 5} more failed cases")
        print(f"  Wall time: {report.wall_time:.2f}s")
        print(f"  Result: {'PASS' if report.passed else 'FAIL'}")
        logger.debug("suite %s digest %s", report.suite, report.digest())

