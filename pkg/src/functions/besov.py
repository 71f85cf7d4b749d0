"""
Littlewood-Paley analysis on the unit circle for trigonometric polynomials.

The pieces use the piecewise-linear weight w supported on [1/2, 2]:

    W_0 = conj(z) + 1 + z,   W_n = sum_k w(k / 2^n) z^k,   W_n^# = conj(W_n)   (n >= 1)

and B^s_pq norms are l^q sums of 2^(ns) ||phi * W_n||_Lp over all pieces.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.functions.analytic import AnalyticFunction, default_grid
from src.utils.errors import InputError, ParameterError

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TrigPolynomial:
    """
    sum_{k = min_k}^{min_k + len - 1} coefficients[k - min_k] z^k on the circle.
    """
    min_k: int
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        if coefficients.ndim != 1 or coefficients.size == 0:
            raise InputError("Fourier coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(coefficients)):
            raise InputError("Fourier coefficients must be finite")
        coefficients.flags.writeable = False
        object.__setattr__(self, "min_k", int(self.min_k))
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_analytic(cls, phi):
        return cls(0, phi.trimmed_coefficients())

    @classmethod
    def from_mapping(cls, coefficients):
        """Build from {frequency: coefficient}."""
        if not coefficients:
            return cls(0, [0.0])
        low, high = min(coefficients), max(coefficients)
        values = np.zeros(high - low + 1, dtype=np.complex128)
        for k, c in coefficients.items():
            values[k - low] = c
        return cls(low, values)

    @property
    def max_k(self):
        return self.min_k + self.coefficients.size - 1

    @property
    def bandwidth(self):
        """M with support inside [-M, M]."""
        return max(abs(self.min_k), abs(self.max_k))

    def frequencies(self):
        return np.arange(self.min_k, self.max_k + 1)

    def coefficient(self, k):
        if self.min_k <= k <= self.max_k:
            return complex(self.coefficients[k - self.min_k])
        return 0j

    def items(self):
        return zip(self.frequencies().tolist(), self.coefficients.tolist())

    def is_analytic(self):
        return self.min_k >= 0 or not np.any(self.coefficients[: -self.min_k])

    def to_analytic(self, label=""):
        """The non-negative frequencies as an AnalyticFunction."""
        projected = riesz_project(self)
        coefficients = np.concatenate([np.zeros(projected.min_k), projected.coefficients])
        return AnalyticFunction(coefficients, label=label)

    def scaled(self, factor):
        return TrigPolynomial(self.min_k, self.coefficients * factor)

    def __add__(self, other):
        low = min(self.min_k, other.min_k)
        high = max(self.max_k, other.max_k)
        values = np.zeros(high - low + 1, dtype=np.complex128)
        values[self.min_k - low: self.max_k - low + 1] += self.coefficients
        values[other.min_k - low: other.max_k - low + 1] += other.coefficients
        return TrigPolynomial(low, values)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return z ** self.min_k * np.polynomial.polynomial.polyval(z, self.coefficients)

    def evaluate(self, grid):
        """Values at exp(2 pi i j / grid), j = 0..grid-1 (frequencies folded mod grid)."""
        folded = np.zeros(grid, dtype=np.complex128)
        np.add.at(folded, self.frequencies() % grid, self.coefficients)
        return np.fft.ifft(folded) * grid


def w_weight(x):
    """
    0 outside [1/2, 2], 2x - 1 on [1/2, 1], 2 - x on [1, 2].

    Exact for Fraction (and int) arguments, float otherwise.
    """
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        if x <= HALF or x >= 2:
            return Fraction(0)
        return 2 * x - 1 if x <= 1 else 2 - x
    x = float(x)
    if x <= 0.5 or x >= 2.0:
        return 0.0
    return 2.0 * x - 1.0 if x <= 1.0 else 2.0 - x


def dyadic_weight(k, n):
    """w(k / 2^n) as an exact Fraction."""
    return w_weight(Fraction(k, 1 << n))


@dataclass(frozen=True)
class LPDecomposition:
    """
    analytic_pieces[n] = phi * W_n for n >= 0,
    antianalytic_pieces[n - 1] = phi * W_n^# for n >= 1.
    """
    analytic_pieces: tuple
    antianalytic_pieces: tuple

    def pieces(self):
        """(n, piece) pairs over both families."""
        result = list(enumerate(self.analytic_pieces))
        result.extend((n, piece) for n, piece in enumerate(self.antianalytic_pieces, start=1))
        return result

    def reconstruct(self):
        total = TrigPolynomial(0, [0.0])
        for _, piece in self.pieces():
            total = total + piece
        return total


def _split(c, major_weight):
    """
    Split c into (c * w, c - c * w) for w in [1/2, 1]; the difference is
    exact in floating point, so the two parts add back to c exactly.
    """
    major = c * float(major_weight)
    return major, c - major


def lp_decompose(phi):
    """
    Littlewood-Paley pieces of phi. Frequency |k| >= 2 with 2^m <= |k| < 2^(m+1)
    lands in pieces m and m + 1 with weights w(|k|/2^m) and w(|k|/2^(m+1)).
    """
    top = max(1, phi.bandwidth.bit_length())
    analytic = [dict() for _ in range(top + 1)]
    antianalytic = [dict() for _ in range(top + 1)]

    for k, c in phi.items():
        if c == 0:
            continue
        if abs(k) <= 1:
            analytic[0][k] = c
            continue
        family = analytic if k > 0 else antianalytic
        m = abs(k).bit_length() - 1
        lower, upper = dyadic_weight(abs(k), m), dyadic_weight(abs(k), m + 1)
        if upper == 0:
            family[m][k] = c
        elif lower >= upper:
            family[m][k], family[m + 1][k] = _split(c, lower)
        else:
            family[m + 1][k], family[m][k] = _split(c, upper)

    # antianalytic pieces start at n = 1
    return LPDecomposition(
        analytic_pieces=tuple(TrigPolynomial.from_mapping(piece) for piece in analytic),
        antianalytic_pieces=tuple(TrigPolynomial.from_mapping(piece) for piece in antianalytic[1:]),
    )


def _parse_exponent(value, name):
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number or 'inf', got {value!r}")
    if not value >= 1:
        raise ParameterError(f"{name} must be in [1, inf], got {value}")
    return value


def lp_norm_on_grid(values, p):
    values = np.abs(values)
    if math.isinf(p):
        return float(values.max())
    return float(np.mean(values ** p) ** (1.0 / p))


def _lq(values, q):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    if math.isinf(q):
        return float(values.max())
    return float(np.sum(values ** q) ** (1.0 / q))


def besov_terms(phi, s, p, grid=None):
    """[(family, n, 2^(ns) ||piece||_Lp)] for every piece of phi."""
    p = _parse_exponent(p, "p")
    if grid is None:
        grid = default_grid(phi.bandwidth)
    elif grid < 64 * (phi.bandwidth + 1):
        raise ParameterError(f"grid = {grid} is below 64 * (M + 1) = {64 * (phi.bandwidth + 1)}")

    decomposition = lp_decompose(phi)
    terms = []
    for n, piece in enumerate(decomposition.analytic_pieces):
        terms.append(("analytic", n, 2.0 ** (n * s) * lp_norm_on_grid(piece.evaluate(grid), p)))
    for n, piece in enumerate(decomposition.antianalytic_pieces, start=1):
        terms.append(("antianalytic", n, 2.0 ** (n * s) * lp_norm_on_grid(piece.evaluate(grid), p)))
    return terms


def besov_norm(phi, s, p, q, grid=None):
    """
    ||phi||_{B^s_pq}: l^q over all pieces of 2^(ns) ||piece||_Lp, with grid
    quadrature (maximum for p = inf).
    """
    q = _parse_exponent(q, "q")
    terms = besov_terms(phi, s, p, grid)
    norm = _lq([value for _, _, value in terms], q)
    logger.debug("besov_norm: s=%s p=%s q=%s over %d pieces -> %.6g", s, p, q, len(terms), norm)
    return norm


def riesz_project(phi):
    """Drop the negative frequencies."""
    if phi.max_k < 0:
        return TrigPolynomial(0, [0.0])
    if phi.min_k >= 0:
        return phi
    return TrigPolynomial(0, phi.coefficients[-phi.min_k:])


def analytic_characterization_ratio(phi, s, n, radii, p=math.inf, grid=None):
    """
    (min, max) over r in radii of (1 - r)^(n - s) ||phi_r^(n)||_Lp / ||phi||_{B^s_p,inf},
    where phi_r(z) = phi(r z).

    The two quantities are equivalent norms with unspecified constants, so
    this is a diagnostic.
    """
    if not phi.is_analytic():
        raise InputError("analytic_characterization_ratio needs an analytic polynomial")
    if n <= s:
        raise ParameterError(f"Derivative order n = {n} must exceed s = {s}")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0 or np.any(radii <= 0) or np.any(radii >= 1):
        raise ParameterError("radii must be a non-empty subset of (0, 1)")

    reference = besov_norm(phi, s, p, math.inf, grid)
    if reference == 0:
        raise ParameterError("The zero function has no characterization ratio")

    p = _parse_exponent(p, "p")
    analytic = phi.to_analytic()
    if grid is None:
        grid = default_grid(analytic.degree)
    powers = np.arange(analytic.coefficients.size)

    ratios = []
    for r in radii:
        dilated = AnalyticFunction(analytic.coefficients * r ** powers)
        values = dilated.derivative(n).boundary_values(grid)
        ratios.append((1 - r) ** (n - s) * lp_norm_on_grid(values, p) / reference)
    return float(min(ratios)), float(max(ratios))
