"""
Reproducible random inputs for the verification suites.

Every case draws from its own generator seeded by (suite seed, case id), so a
case can be regenerated on its own and the cases may run in any order.
"""
import numpy as np
from scipy.linalg import qr

from src.functions.analytic import AnalyticFunction
from src.linalg.matcore import operator_norm
from src.utils.errors import ParameterError

CONTRACTION_MODES = ("strict", "boundary", "unitary")
STRICT_SCALE = 0.9


def _check_seed(seed):
    if int(seed) != seed or seed < 0:
        raise ParameterError(f"Seeds must be non-negative integers, got {seed}")
    return int(seed)


def gaussian_matrix(rng, dim):
    """Complex Ginibre matrix with unit-variance entries."""
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def haar_unitary(rng, dim):
    """QR of a Ginibre matrix with the phases of diag(R) divided out."""
    q, r = qr(gaussian_matrix(rng, dim))
    d = np.diag(r)
    return q * (d / np.abs(d))


def contraction_from_rng(rng, dim, mode="strict"):
    """
    strict:   G scaled by 0.9 / max(1, ||G||)
    boundary: G scaled by 1 / ||G||
    unitary:  Haar-distributed unitary
    """
    if dim < 1:
        raise ParameterError(f"dim must be >= 1, got {dim}")
    if mode not in CONTRACTION_MODES:
        raise ParameterError(f"Unknown contraction mode '{mode}'. Choose one of: "
                             f"{', '.join(CONTRACTION_MODES)}")
    if mode == "unitary":
        return haar_unitary(rng, dim)
    G = gaussian_matrix(rng, dim)
    norm = operator_norm(G)
    if mode == "strict":
        return G * (STRICT_SCALE / max(1.0, norm))
    return G / norm


def random_contraction(seed, dim, mode="strict"):
    """Deterministic in (seed, dim, mode)."""
    rng = np.random.default_rng(_check_seed(seed))
    return contraction_from_rng(rng, dim, mode)


def random_polynomial(rng, degree, label=None):
    """Complex Gaussian Taylor coefficients with a non-zero leading term."""
    coefficients = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / np.sqrt(2)
    if degree > 0 and coefficients[-1] == 0:
        coefficients[-1] = 1.0
    return AnalyticFunction(coefficients, label=label or f"random deg {degree}")


class CaseGenerator:
    """
    Source of per-case generators for one suite run.
    """
    def __init__(self, seed, dims=(1, 6), degrees=(1, 10)):
        self.seed = _check_seed(seed)
        self.dims = dims
        self.degrees = degrees

    def rng(self, case_id):
        return np.random.default_rng(np.random.SeedSequence([self.seed, case_id]))

    def dim(self, rng):
        return int(rng.integers(self.dims[0], self.dims[1] + 1))

    def degree(self, rng, low=None, high=None):
        low = self.degrees[0] if low is None else max(low, self.degrees[0])
        high = self.degrees[1] if high is None else min(high, self.degrees[1])
        if low > high:
            low = high
        return int(rng.integers(low, high + 1))

    def mode(self, rng):
        """Mostly strict contractions, with boundary and unitary cases mixed in."""
        return str(rng.choice(CONTRACTION_MODES, p=(0.6, 0.25, 0.15)))

    def contraction(self, rng, dim, mode=None):
        return contraction_from_rng(rng, dim, self.mode(rng) if mode is None else mode)

    def operator(self, rng, dim):
        """Gaussian matrix normalised to operator norm 1."""
        G = gaussian_matrix(rng, dim)
        return G / operator_norm(G)

    def polynomial(self, rng, low=None, high=None):
        return random_polynomial(rng, self.degree(rng, low, high))
