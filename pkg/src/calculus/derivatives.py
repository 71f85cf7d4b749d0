"""
Operator derivatives of t -> phi(T_t) along a ContractionPath.

    d/dt   phi(T_t) = MOI(D phi;   T_t, R - T, T_t)
    d^n/dt^n        = n! MOI(D^n phi; T_t, R - T, T_t, ..., R - T, T_t)

computed through tensor expansions, with an exact noncommutative Taylor
expansion as an independent oracle.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.functions.analytic import eval_on_contraction, polyval_matrix
from src.functions.divided_differences import tensor_expansion
from src.integrals.operator_integrals import doi_tensor, moi_tensor
from src.linalg.matcore import hs_norm, operator_norm
from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)

ORACLE_MAX_DEGREE = 12
FIRST_ORDER_STEPS = (1e-2, 1e-3, 1e-4)
SECOND_ORDER_STEPS = (1e-1, 1e-2, 1e-3)
HS_STEPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
# multiples of machine epsilon treated as round-off in difference stencils
ROUNDOFF_FACTOR = 64


@dataclass(frozen=True)
class DerivativeReport:
    order: int
    formula_value: np.ndarray
    oracle_value: np.ndarray
    residual: float
    norm_used: str
    steps: tuple = ()
    residuals: tuple = ()
    observed_order: float = None

    def __post_init__(self):
        if self.norm_used not in ("operator", "hilbert_schmidt"):
            raise ParameterError(f"Unknown norm '{self.norm_used}'")


@dataclass(frozen=True)
class ConvergenceEstimate:
    """
    Errors of a difference stencil over a step schedule and the least-squares
    slope of log(error) against log(step). `order` is None when every error is
    at round-off level.
    """
    steps: tuple
    errors: tuple
    floors: tuple = field(repr=False)
    order: float = None

    @property
    def exact(self):
        return self.order is None


def _least_squares_order(steps, errors, floors):
    usable = [(h, e) for h, e, floor in zip(steps, errors, floors) if e > floor]
    if len(usable) < 2:
        return None
    log_h = np.log([h for h, _ in usable])
    log_e = np.log([e for _, e in usable])
    slope, _ = np.polyfit(log_h, log_e, 1)
    return float(slope)


def derivative(phi, path, t):
    """First derivative at t."""
    A = path.at(t)
    return doi_tensor(tensor_expansion(phi, 1), A, path.direction, A)


def second_derivative(phi, path, t):
    """Second derivative at t: 2 MOI(D^2 phi; T_t, R - T, T_t, R - T, T_t)."""
    return nth_derivative(phi, path, t, 2)


def nth_derivative(phi, path, t, n):
    if n < 1:
        raise ParameterError(f"Derivative order must be >= 1, got {n}")
    A = path.at(t)
    if n > phi.degree:
        return np.zeros_like(A, dtype=np.complex128)
    delta = path.direction
    value = moi_tensor(tensor_expansion(phi, n), [A] * (n + 1), [delta] * n)
    return math.factorial(n) * value


def polynomial_taylor_oracle(phi, path, t, n):
    """
    n! times the coefficient of s^n in phi(T_t + s (R - T)), from an explicit
    sum over the words in {T_t, R - T} with exactly n letters R - T.
    """
    if phi.degree > ORACLE_MAX_DEGREE:
        raise ParameterError(
            f"Taylor oracle supports degree <= {ORACLE_MAX_DEGREE}, got {phi.degree}")
    if n < 0:
        raise ParameterError(f"Taylor coefficient index must be >= 0, got {n}")
    A = path.at(t)
    delta = path.direction
    if n == 0:
        return polyval_matrix(phi.trimmed_coefficients(), A)

    identity = np.eye(A.shape[0], dtype=np.complex128)
    total = np.zeros_like(identity)
    for m, c in enumerate(phi.trimmed_coefficients()):
        if c == 0 or m < n:
            continue
        words = np.zeros_like(identity)
        for positions in itertools.combinations(range(m), n):
            chosen = set(positions)
            word = identity
            for letter in range(m):
                word = word @ (delta if letter in chosen else A)
            words += word
        total += c * words
    return math.factorial(n) * total


def _phi_at(phi, path, t):
    return polyval_matrix(phi.trimmed_coefficients(), path.at(t))


def roundoff_floor(phi, h, power):
    """Rounding level of a step-h difference stencil dividing by h**power."""
    scale = sum(abs(c) * (1 + h) ** k for k, c in enumerate(phi.trimmed_coefficients()))
    return ROUNDOFF_FACTOR * np.finfo(float).eps * max(scale, 1.0) / h ** power


def central_difference_order(phi, path, t, order=1, steps=None):
    """
    Convergence of the central first (order=1) or second (order=2)
    difference of phi(T_t) towards the formula derivative.
    """
    if order == 1:
        steps = FIRST_ORDER_STEPS if steps is None else tuple(steps)
        target = derivative(phi, path, t)

        def stencil(h):
            return (_phi_at(phi, path, t + h) - _phi_at(phi, path, t - h)) / (2 * h)
    elif order == 2:
        steps = SECOND_ORDER_STEPS if steps is None else tuple(steps)
        target = second_derivative(phi, path, t)
        centre = _phi_at(phi, path, t)

        def stencil(h):
            return (_phi_at(phi, path, t + h) - 2 * centre + _phi_at(phi, path, t - h)) / h ** 2
    else:
        raise ParameterError(f"Central differences are available for orders 1 and 2, got {order}")

    errors = tuple(operator_norm(stencil(h) - target) for h in steps)
    floors = tuple(roundoff_floor(phi, h, order) for h in steps)
    observed = _least_squares_order(steps, errors, floors)
    logger.debug("central_difference_order: order=%d, errors=%s, observed=%s",
                 order, ["%.2e" % e for e in errors], observed)
    return ConvergenceEstimate(steps=steps, errors=errors, floors=floors, order=observed)


def derivative_increment_residual(phi, path, t):
    """
    ||D(t) - D(0) - t [MOI(D^2 phi; T_t, R-T, T_0, R-T, T_t)
                       + MOI(D^2 phi; T_0, R-T, T_0, R-T, T_t)]||,
    D(s) the first derivative at s.
    """
    second = tensor_expansion(phi, 2)
    A, B, delta = path.at(t), path.at(0.0), path.direction
    correction = (moi_tensor(second, [A, B, A], [delta, delta])
                  + moi_tensor(second, [B, B, A], [delta, delta]))
    difference = derivative(phi, path, t) - derivative(phi, path, 0.0)
    return operator_norm(difference - t * correction)


def difference_quotient_s2(phi, path, s):
    """(phi(T_s) - phi(T)) / s."""
    if not 0 < s <= 1:
        raise ParameterError(f"Step s must lie in (0, 1], got {s}")
    return (eval_on_contraction(phi, path.at(s)) - eval_on_contraction(phi, path.T)) / s


def hs_differentiability_report(phi, path, steps=HS_STEPS):
    """
    Hilbert-Schmidt residuals of the difference quotients at s in `steps`
    against the derivative at 0, with the observed convergence order.
    """
    steps = tuple(steps)
    target = derivative(phi, path, 0.0)
    quotients = [difference_quotient_s2(phi, path, s) for s in steps]
    residuals = tuple(hs_norm(q - target) for q in quotients)
    floors = tuple(roundoff_floor(phi, s, 1) for s in steps)
    observed = _least_squares_order(steps, residuals, floors)
    return DerivativeReport(
        order=1,
        formula_value=target,
        oracle_value=quotients[-1],
        residual=residuals[-1],
        norm_used="hilbert_schmidt",
        steps=steps,
        residuals=residuals,
        observed_order=observed,
    )


def derivative_report(phi, path, t, n):
    """nth_derivative against the Taylor oracle in the operator norm."""
    formula = nth_derivative(phi, path, t, n)
    oracle = polynomial_taylor_oracle(phi, path, t, n)
    return DerivativeReport(order=n, formula_value=formula, oracle_value=oracle,
                            residual=operator_norm(formula - oracle), norm_used="operator")
