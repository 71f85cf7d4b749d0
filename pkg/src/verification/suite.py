import abc
import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from src.simulation.case_generator import CaseGenerator

REPORT_SCHEMA = 1
CSV_COLUMNS = ("case_id", "dim", "degree", "residual", "tolerance", "pass")


def inputs_digest(*inputs):
    """Short sha256 over the case inputs (arrays by their bytes, the rest by repr)."""
    digest = hashlib.sha256()
    for item in inputs:
        if isinstance(item, np.ndarray):
            digest.update(np.ascontiguousarray(item, dtype=np.complex128).tobytes())
        elif hasattr(item, "coefficients"):
            digest.update(np.ascontiguousarray(item.coefficients).tobytes())
        else:
            digest.update(repr(item).encode())
    return digest.hexdigest()[:16]


def _json_float(value):
    """inf and nan are not valid JSON; they are written as strings."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else str(value)


@dataclass(frozen=True)
class CaseRecord:
    case_id: int
    dim: int
    degree: int
    residual: float
    tolerance: float
    passed: bool
    digest: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        record = asdict(self)
        record["residual"] = _json_float(self.residual)
        return record


@dataclass(frozen=True)
class SuiteCheck:
    """A suite-level check that is not tied to one random case."""
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self):
        check = asdict(self)
        check["value"] = _json_float(self.value)
        return check


@dataclass
class SuiteReport:
    suite: str
    config: dict
    tolerance_name: str
    records: list
    checks: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.records) and all(c.passed for c in self.checks)

    @property
    def pass_count(self):
        return sum(r.passed for r in self.records)

    @property
    def max_residual(self):
        return max((r.residual for r in self.records), default=0.0)

    def body(self):
        """Everything but the digest and the wall time."""
        records = sorted(self.records, key=lambda r: r.case_id)
        return {
            "schema": REPORT_SCHEMA,
            "suite": self.suite,
            "config": self.config,
            "tolerance_name": self.tolerance_name,
            "summary": {
                "cases": len(records),
                "passed": self.pass_count,
                "max_residual": _json_float(self.max_residual),
                "pass": self.passed,
            },
            "cases": [r.to_dict() for r in records],
            "checks": [c.to_dict() for c in self.checks],
            "extras": self.extras,
        }

    def digest(self):
        canonical = json.dumps(self.body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def to_dict(self):
        report = self.body()
        report["digest"] = self.digest()
        report["wall_time"] = self.wall_time
        return report


def emit_csv(report, path):
    """One row per case, sorted by case id."""
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            for r in sorted(report.records, key=lambda r: r.case_id):
                writer.writerow([r.case_id, r.dim, r.degree, repr(float(r.residual)),
                                 repr(float(r.tolerance)), "true" if r.passed else "false"])
    except OSError as exc:
        raise OSError(f"Could not write CSV report to {path}: {exc}") from exc


class VerificationSuite(abc.ABC):
    """
    Base class of the verification suites. A suite turns a case id into one
    CaseRecord; cases are independent and draw from their own generators.
    """
    name = ""
    tolerance_name = ""
    description = ""

    def __init__(self, config):
        self.config = config
        self.tolerances = config.tolerances
        self.generator = CaseGenerator(config.seed, config.dims, config.degrees)

    @property
    def tolerance(self):
        return getattr(self.tolerances, self.tolerance_name)

    @abc.abstractmethod
    def run_case(self, case_id, rng):
        """
        Build and check one case.
        """
        pass

    def suite_checks(self):
        """Checks run once per suite."""
        return []

    def extras(self):
        return {}

    def error_record(self, case_id, exc):
        """A failed case for a run_case that raised; dim and degree are unknown (0)."""
        return CaseRecord(case_id=case_id, dim=0, degree=0, residual=math.inf,
                          tolerance=self.tolerance, passed=False, digest="",
                          details={"error": f"{type(exc).__name__}: {exc}"})

    def record(self, case_id, dim, degree, residual, inputs, side_checks=True,
               tolerance=None, **details):
        tolerance = self.tolerance if tolerance is None else tolerance
        residual = float(residual)
        passed = bool(residual <= tolerance and side_checks)
        return CaseRecord(case_id=case_id, dim=dim, degree=degree, residual=residual,
                          tolerance=tolerance, passed=passed,
                          digest=inputs_digest(*inputs), details=details)
