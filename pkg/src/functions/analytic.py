"""
Functional calculus of contractions for disk-algebra functions.

Polynomials are evaluated at a matrix with Horner's rule; other disk-algebra
functions enter through Cesaro means of their Taylor series, whose error on
phi(T) is controlled by von Neumann's inequality.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import spence

from src.linalg.matcore import as_square, operator_norm, require_contraction
from src.utils.errors import InputError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalyticFunction:
    """
    phi(z) = sum_k c_k z^k with finitely many Taylor coefficients.
    """
    coefficients: np.ndarray
    label: str = ""

    def __post_init__(self):
        coefficients = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        if coefficients.ndim != 1:
            raise InputError("Taylor coefficients must be a 1-D sequence")
        if not np.all(np.isfinite(coefficients)):
            raise InputError("Taylor coefficients must be finite")
        if coefficients.size == 0:
            coefficients = np.zeros(1, dtype=np.complex128)
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def monomial(cls, m, coefficient=1.0):
        coefficients = np.zeros(m + 1, dtype=np.complex128)
        coefficients[m] = coefficient
        return cls(coefficients, label=f"z^{m}")

    @property
    def degree(self):
        """Index of the last non-zero coefficient (0 for constants and zero)."""
        nonzero = np.flatnonzero(self.coefficients)
        return int(nonzero[-1]) if nonzero.size else 0

    def trimmed_coefficients(self):
        return self.coefficients[: self.degree + 1]

    def __call__(self, z):
        """Evaluate at scalar or array arguments."""
        z = np.asarray(z, dtype=np.complex128)
        return np.polynomial.polynomial.polyval(z, self.trimmed_coefficients())

    def derivative(self, order=1):
        coefficients = np.polynomial.polynomial.polyder(self.trimmed_coefficients(), order)
        return AnalyticFunction(coefficients, label=f"({self.label})'" if self.label else "")

    def __mul__(self, other):
        coefficients = np.polynomial.polynomial.polymul(
            self.trimmed_coefficients(), other.trimmed_coefficients())
        return AnalyticFunction(coefficients, label=f"({self.label})*({other.label})")

    def __add__(self, other):
        coefficients = np.polynomial.polynomial.polyadd(
            self.trimmed_coefficients(), other.trimmed_coefficients())
        return AnalyticFunction(coefficients, label=f"{self.label}+{other.label}")

    def scaled(self, factor):
        return AnalyticFunction(self.coefficients * factor, label=self.label)

    def boundary_values(self, grid):
        """
        Values at the grid points exp(2 pi i j / grid), j = 0..grid-1, via FFT.

        Coefficients beyond the grid size are folded modulo grid, which is
        exact at roots of unity.
        """
        coefficients = self.trimmed_coefficients()
        folded = np.zeros(grid, dtype=np.complex128)
        np.add.at(folded, np.arange(coefficients.size) % grid, coefficients)
        return np.fft.ifft(folded) * grid


def polyval_matrix(coefficients, A):
    """
    Horner evaluation of sum_k c_k A^k for any square matrix A.
    """
    A = as_square(A, "A")
    identity = np.eye(A.shape[0], dtype=np.complex128)
    result = np.zeros_like(identity)
    for c in reversed(np.asarray(coefficients, dtype=np.complex128)):
        result = result @ A + c * identity
    return result


def eval_on_contraction(phi, T):
    """
    phi(T) for a contraction T.
    """
    T = require_contraction(T)
    return polyval_matrix(phi.trimmed_coefficients(), T)


def eval_via_dilation(phi, T, degree=None):
    """
    phi(T) as the integral of phi against the semi-spectral measure of T.
    """
    from src.dilation.power_dilation import power_dilation
    from src.dilation.semispectral import integrate, semispectral_from_dilation

    T = require_contraction(T)
    N = max(1, phi.degree) if degree is None else degree
    measure = semispectral_from_dilation(power_dilation(T, N))
    return integrate(measure, phi)


def cesaro_mean(phi, n):
    """
    n-th Cesaro mean: coefficient k becomes (1 - k/(n+1)) c_k for k <= n.
    """
    if n < 0:
        raise ParameterError(f"Cesaro index must be non-negative, got {n}")
    coefficients = phi.coefficients[: n + 1]
    taper = 1.0 - np.arange(coefficients.size) / (n + 1)
    return AnalyticFunction(coefficients * taper, label=f"sigma_{n}({phi.label})")


# sampled peaks this far below the grid maximum are not polished
PEAK_WINDOW = 1e-2


def default_grid(degree):
    """Power of two with at least 64 * (degree + 1) points."""
    return 1 << math.ceil(math.log2(64 * (degree + 1)))


def circle_sup_norm(phi, grid=None, refine=16):
    """
    sup |phi| on the unit circle.

    The grid maximum is polished by bounded scalar maximisation around the
    `refine` highest local maxima of the sampled values, which removes the
    O((deg/grid)^2) grid bias. refine=0 returns the plain grid maximum.
    """
    if grid is None:
        grid = default_grid(phi.degree)
    values = np.abs(phi.boundary_values(grid))
    best = float(values.max())
    if phi.degree == 0 or refine == 0:
        return best

    peaks = np.flatnonzero((values >= np.roll(values, 1)) & (values >= np.roll(values, -1))
                           & (values >= (1 - PEAK_WINDOW) * best))
    peaks = peaks[np.argsort(values[peaks])[-refine:]]

    step = 2 * np.pi / grid
    for j in peaks:
        centre = j * step
        result = minimize_scalar(
            lambda theta: -abs(phi(np.exp(1j * theta))),
            bounds=(centre - step, centre + step), method="bounded",
            options={"xatol": 1e-12})
        best = max(best, -float(result.fun))
    return best


def von_neumann_residual(phi, T, grid=None):
    """
    ||phi(T)|| - sup_T |phi|; von Neumann's inequality says this is <= 0.
    """
    value = eval_on_contraction(phi, T)
    if grid is None:
        grid = default_grid(phi.degree)
    return operator_norm(value) - circle_sup_norm(phi, grid)


@dataclass(frozen=True)
class DiskAlgebraFunction:
    """
    A disk-algebra function given by a Taylor coefficient rule
    k -> c_k and, where known, a closed form on the closed disk.
    """
    label: str
    coefficient: callable
    closed_form: callable = field(default=None, compare=False)

    def taylor_polynomial(self, n):
        coefficients = np.array([self.coefficient(k) for k in range(n + 1)], dtype=np.complex128)
        return AnalyticFunction(coefficients, label=f"{self.label}[<= {n}]")

    def boundary_values(self, grid, reference_degree):
        """
        Reference values on the grid: the closed form when available, else a
        long Taylor section of the given degree.
        """
        points = np.exp(2j * np.pi * np.arange(grid) / grid)
        if self.closed_form is not None:
            return np.asarray(self.closed_form(points), dtype=np.complex128)
        return self.taylor_polynomial(reference_degree).boundary_values(grid)


def cesaro_error(f, n, grid=4096, reference_degree=1 << 15):
    """Achieved ||sigma_n(f) - f||_inf on the grid."""
    reference = f.boundary_values(grid, reference_degree)
    values = cesaro_mean(f.taylor_polynomial(n), n).boundary_values(grid)
    return float(np.max(np.abs(values - reference)))


def _exp_coefficient(k):
    return math.exp(-math.lgamma(k + 1))


def _cubic_decay_coefficient(k):
    return 1.0 / k ** 3 if k else 0.0


def _quadratic_decay_coefficient(k):
    return 1.0 / k ** 2 if k else 0.0


DISK_ALGEBRA_CATALOGUE = {
    "exp": DiskAlgebraFunction("exp", _exp_coefficient, np.exp),
    # phi' is in the disk algebra
    "trilog": DiskAlgebraFunction("trilog", _cubic_decay_coefficient),
    # phi is in the disk algebra, phi' is unbounded near z = 1
    "dilog": DiskAlgebraFunction("dilog", _quadratic_decay_coefficient,
                                 lambda z: spence(1 - z)),
}


def cesaro_truncation(f, tol=1e-3, grid=4096, max_degree=1 << 14, reference_degree=1 << 15):
    """
    Smallest n with ||sigma_n(f) - f||_inf <= tol on the grid.

    Doubling finds an admissible n, bisection then shrinks it. Returns the
    Cesaro mean and n.
    """
    reference = f.boundary_values(grid, reference_degree)
    long_section = f.taylor_polynomial(max_degree)

    def error(n):
        values = cesaro_mean(long_section, n).boundary_values(grid)
        return float(np.max(np.abs(values - reference)))

    high = 1
    while error(high) > tol:
        if high >= max_degree:
            raise ParameterError(
                f"Cesaro means of {f.label} do not reach tolerance {tol} below degree {max_degree}")
        high = min(2 * high, max_degree)
    low = high // 2
    while high - low > 1:
        middle = (low + high) // 2
        if error(middle) <= tol:
            high = middle
        else:
            low = middle

    logger.debug("cesaro_truncation: %s needs degree %d for tolerance %.1e", f.label, high, tol)
    return cesaro_mean(long_section, high), high
