import sys
from pathlib import Path

import numpy as np
import pytest

# add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.simulation.case_generator import contraction_from_rng, gaussian_matrix  # noqa: E402
from src.utils.errors import EvaluationError  # noqa: E402
from src.verification.suite import VerificationSuite  # noqa: E402
from src.verification.suite_factory import SuiteFactory  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture
def contraction(rng):
    """Factory for seeded strict contractions."""
    def make(dim, mode="strict"):
        return contraction_from_rng(rng, dim, mode)
    return make


@pytest.fixture
def operator(rng):
    """Factory for seeded Gaussian operators of norm about sqrt(dim)."""
    def make(dim):
        return gaussian_matrix(rng, dim)
    return make


class FlakySuite(VerificationSuite):
    name = "flaky"
    tolerance_name = "vn"
    description = "second case cannot be evaluated"

    def run_case(self, case_id, rng):
        if case_id == 1:
            raise EvaluationError("kernel returned nan")
        return self.record(case_id, 1, 1, 0.0, [case_id])


@pytest.fixture
def flaky_suite(monkeypatch):
    """Registers a suite whose case 1 raises."""
    monkeypatch.setitem(SuiteFactory.SUITES, FlakySuite.name, FlakySuite)
    return FlakySuite.name
