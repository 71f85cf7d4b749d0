import os
import re
import glob
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from src.utils.errors import ParameterError

project_root = Path(__file__).resolve().parent.parent.parent


def default_output_dir(project_root=project_root):
    """
    Directory where suite reports are written unless --out says otherwise.
    """
    output_dir = os.path.join(project_root, "data", "outputs", "verification_results")
    os.makedirs(output_dir, exist_ok=True)
    return output_dir


@dataclass(frozen=True)
class Tolerances:
    """
    Named tolerances used by the matrix kernel and by the verification suites.

    The first group are numerical contracts of the library, the second group
    are acceptance thresholds of the suites (overridable with --tol name=value).
    """
    unit: float = 1e-10
    orth: float = 1e-10
    recon_per_dim: float = 1e-9
    grid_slack: float = 1e-6
    merge_arc: float = 1e-8
    diagonal: float = 1e-8

    dilation: float = 1e-9
    semispectral: float = 1e-9
    vn: float = 1e-6
    increment: float = 1e-8
    commutator: float = 1e-8
    derivative: float = 1e-10
    hs_lipschitz: float = 1e-8
    hs_diff: float = 10.0
    besov: float = 1e-9
    doi_dual: float = 1e-9

    def recon(self, dim):
        """Reconstruction tolerance for a matrix of the given dimension."""
        return self.recon_per_dim * max(1, dim)

    def with_overrides(self, overrides):
        """
        Return a copy with the given name -> value overrides applied.

        Names may use dashes (hs-diff) or underscores (hs_diff).
        """
        known = {f.name for f in fields(self)}
        changes = {}
        for name, value in (overrides or {}).items():
            key = name.replace("-", "_")
            if key not in known:
                raise ParameterError(f"Unknown tolerance name: {name}")
            if not value > 0:
                raise ParameterError(f"Tolerance {name} must be positive, got {value}")
            changes[key] = float(value)
        return replace(self, **changes)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SuiteConfig:
    """
    Parameters of one verification suite run.
    """
    seed: int = 42
    dims: tuple = (1, 6)
    degrees: tuple = (1, 10)
    cases: int = 200
    tolerance_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cases < 1:
            raise ParameterError(f"cases must be >= 1, got {self.cases}")
        for name in ("dims", "degrees"):
            low, high = getattr(self, name)
            if low > high:
                raise ParameterError(f"{name} range {low}..{high} is empty")
        if self.dims[0] < 1:
            raise ParameterError(f"dims must start at 1 or above, got {self.dims[0]}")
        if self.degrees[0] < 0:
            raise ParameterError(f"degrees must be non-negative, got {self.degrees[0]}")
        # rejects unknown names and non-positive values
        DEFAULT_TOLERANCES.with_overrides(self.tolerance_overrides)

    @property
    def tolerances(self):
        return DEFAULT_TOLERANCES.with_overrides(self.tolerance_overrides)

    def to_dict(self):
        return {
            "seed": self.seed,
            "dims": list(self.dims),
            "degrees": list(self.degrees),
            "cases": self.cases,
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
        }


def parse_range(text):
    """
    Parse 'A..B' (or a single integer 'A') into an inclusive (A, B) tuple.
    """
    match = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not match:
        raise ParameterError(f"Expected a range like 1..6, got {text!r}")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if low > high:
        raise ParameterError(f"Range {text!r} is empty")
    return (low, high)


def parse_tolerance(text):
    """
    Parse 'name=value' into a (name, float) pair.
    """
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise ParameterError(f"Expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise ParameterError(f"Tolerance value for {name!r} is not a number: {value!r}")


def find_latest_report(suite_name, reports_dir=None):
    """
    Find the most recent JSON report written for a suite.
    """
    if reports_dir is None:
        reports_dir = default_output_dir()

    pattern = os.path.join(reports_dir, f"{suite_name}_report_*.json")
    report_files = glob.glob(pattern)

    if not report_files:
        print(f"No existing reports found for {suite_name}")
        return None

    # file names carry a sortable timestamp
    stamped = []
    for report_file in report_files:
        match = re.search(r"_report_(\d{8}_\d{6})\.json$", report_file)
        if match:
            stamped.append((match.group(1), report_file))

    if not stamped:
        print(f"Could not parse timestamps from report filenames in {reports_dir}")
        return None

    stamped.sort(key=lambda x: x[0], reverse=True)
    return stamped[0][1]
