"""
Increment and commutator formulas for functions of contractions, and the
Hilbert-Schmidt Lipschitz estimates they imply.

    phi(T) - phi(R)     = DOI(D phi; E_T, T - R, E_R)
    phi(T) Q - Q phi(T) = DOI(D phi; E_T, T Q - Q T, E_T)
"""
import logging

from src.functions.analytic import circle_sup_norm, eval_on_contraction
from src.integrals.kernels import DiagonalPolicy, DividedDifferenceKernel
from src.integrals.operator_integrals import doi_dilation
from src.linalg.matcore import as_square, hs_norm, operator_norm
from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


def increment_formula_residual(phi, path, policy=DiagonalPolicy.DERIVATIVE, N=None):
    """
    ||phi(T) - phi(R) - DOI(D phi; E_T, T - R, E_R)|| along the endpoints of path.
    """
    kernel = DividedDifferenceKernel(phi, policy)
    T, R = path.T, path.R
    lhs = eval_on_contraction(phi, T) - eval_on_contraction(phi, R)
    rhs = doi_dilation(kernel, T, T - R, R, N)
    residual = operator_norm(lhs - rhs)
    logger.debug("increment_formula_residual: deg=%d, policy=%s, residual=%.3e",
                 phi.degree, kernel.policy.value, residual)
    return residual


def commutator_formula_residual(phi, T, Q, policy=DiagonalPolicy.DERIVATIVE, N=None):
    """
    ||phi(T) Q - Q phi(T) - DOI(D phi; E_T, T Q - Q T, E_T)||.

    The right measure comes from a dilation one degree higher than the left
    one, so the two atom sets are disjoint for generic T and the zero
    diagonal policy is never consulted.
    """
    kernel = DividedDifferenceKernel(phi, policy)
    T = as_square(T, "T")
    Q = as_square(Q, "Q")
    if T.shape != Q.shape:
        raise InputError(f"T and Q must have the same shape, got {T.shape} and {Q.shape}")
    N = kernel.required_degree if N is None else N

    value = eval_on_contraction(phi, T)
    lhs = value @ Q - Q @ value
    rhs = doi_dilation(kernel, T, T @ Q - Q @ T, T, N, right_degree=N + 1)
    return operator_norm(lhs - rhs)


def hs_lipschitz_margin(phi, path, Q=None):
    """
    (lhs, rhs) of the Hilbert-Schmidt Lipschitz estimate with constant sup |phi'|:

        Q is None:  ||phi(T) - phi(R)||_2   vs  sup|phi'| ||T - R||_2
        otherwise:  ||phi(T)Q - Q phi(T)||_2 vs  sup|phi'| ||TQ - QT||_2
    """
    constant = circle_sup_norm(phi.derivative())
    T = path.T
    if Q is None:
        R = path.R
        lhs = hs_norm(eval_on_contraction(phi, T) - eval_on_contraction(phi, R))
        return lhs, constant * hs_norm(T - R)

    Q = as_square(Q, "Q")
    value = eval_on_contraction(phi, T)
    lhs = hs_norm(value @ Q - Q @ value)
    return lhs, constant * hs_norm(T @ Q - Q @ T)


def hs_lipschitz_check(phi, path, Q=None, slack=DEFAULT_TOLERANCES.hs_lipschitz):
    lhs, rhs = hs_lipschitz_margin(phi, path, Q)
    return lhs <= rhs + slack
