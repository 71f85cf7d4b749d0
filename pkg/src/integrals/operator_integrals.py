"""
Double and multiple operator integrals with respect to the semi-spectral
measures of contractions.

Two independent routes:

    dilation route  Hadamard-weighted sums over the eigenpairs of unitary
                    power dilations, compressed back to H
    tensor route    finite elementary-tensor expansions, where every
                    monomial factor integrates to a power of its contraction
"""
import logging

import numpy as np

from src.dilation.power_dilation import power_dilation
from src.linalg.matcore import (adjoint, as_square, hs_norm, matrix_power_table,
                                operator_norm, require_contraction, unitary_eig)
from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import (EvaluationError, InputError, ParameterError,
                              PreconditionViolation)

logger = logging.getLogger(__name__)

REPRESENTATION_GRID = 32
REPRESENTATION_SAMPLES = 1024
REPRESENTATION_SEED = 20240521


def _dilation_frame(T, degree):
    """Eigenvalues of the degree-N dilation and their eigenvectors cut down to H."""
    dilation = power_dilation(T, degree)
    system = unitary_eig(dilation.unitary)
    return system.eigenvalues, system.eigenvectors[: dilation.base_dim, :]


def _kernel_matrix(Phi, left_points, right_points):
    try:
        values = np.asarray(Phi(left_points[:, None], right_points[None, :]), dtype=np.complex128)
    except EvaluationError:
        raise
    except Exception as exc:
        raise EvaluationError(f"Kernel could not be evaluated at the atom pairs: {exc}")
    target = (left_points.size, right_points.size)
    try:
        values = np.broadcast_to(values, target)
    except ValueError:
        raise EvaluationError(f"Kernel returned shape {values.shape}, expected {target}")
    if not np.all(np.isfinite(values)):
        raise EvaluationError("Kernel is undefined (non-finite) at an atom pair")
    return values


def _resolve_degree(Phi, N):
    if N is None:
        N = getattr(Phi, "required_degree", None)
    if N is None:
        raise ParameterError("A dilation degree N is needed for a kernel without required_degree")
    return N


def _check_operands(T, Q, R):
    T = require_contraction(T, "T")
    R = require_contraction(R, "R")
    Q = as_square(Q, "Q")
    if not T.shape == Q.shape == R.shape:
        raise InputError(f"Shapes differ: T {T.shape}, Q {Q.shape}, R {R.shape}")
    return T, Q, R


def _doi_parts(Phi, T, Q, R, N, right_degree, block_size):
    T, Q, R = _check_operands(T, Q, R)
    N = _resolve_degree(Phi, N)
    right_degree = N if right_degree is None else right_degree

    left_points, A = _dilation_frame(T, N)
    right_points, B = _dilation_frame(R, right_degree)
    kernel = _kernel_matrix(Phi, left_points, right_points)

    # (i, j) entry is the H-part of v_i* Q~ w_j
    middle = adjoint(A) @ Q @ B
    weighted = kernel * middle

    if block_size is None:
        result = A @ weighted @ adjoint(B)
    else:
        if block_size < 1:
            raise ParameterError(f"block_size must be positive, got {block_size}")
        result = np.zeros(Q.shape, dtype=np.complex128)
        B_star = adjoint(B)
        for start in range(0, weighted.shape[0], block_size):
            rows = slice(start, start + block_size)
            result += A[:, rows] @ weighted[rows] @ B_star

    logger.debug("doi_dilation: d=%d, degrees (%d, %d), %d x %d atom pairs",
                 Q.shape[0], N, right_degree, left_points.size, right_points.size)
    return result, kernel


def doi_dilation(Phi, T, Q, R, N=None, right_degree=None, block_size=None):
    """
    DOI of Phi with respect to the semi-spectral measures of T (left) and R
    (right), applied to Q.

    Phi is called once with broadcastable arrays (zeta[:, None], tau[None, :]).
    The right slot uses `right_degree` (default N). `block_size` sums the
    Hadamard product over row blocks in a fixed order.
    """
    result, _ = _doi_parts(Phi, T, Q, R, N, right_degree, block_size)
    return result


def doi_tensor(expansion, T, Q, R):
    """
    sum_j c_j T^a_j Q R^b_j, grouped by the left exponent.
    """
    if expansion.order != 1:
        raise ParameterError(f"doi_tensor needs a first-order expansion, got order {expansion.order}")
    T, Q, R = _check_operands(T, Q, R)
    H = expansion.coefficient_matrix()
    size = H.shape[0]
    T_powers = matrix_power_table(T, size - 1)
    R_powers = np.array(matrix_power_table(R, size - 1))

    result = np.zeros(Q.shape, dtype=np.complex128)
    for a in range(size):
        if not np.any(H[a]):
            continue
        right = np.tensordot(H[a], R_powers, axes=(0, 0))
        result += T_powers[a] @ Q @ right
    return result


def moi_tensor(expansion, contractions, operators):
    """
    sum_j c_j T_1^a_1 Q_1 T_2^a_2 Q_2 ... Q_n T_{n+1}^a_{n+1} for an order-n
    expansion, n + 1 contractions and n operators.
    """
    n = expansion.order
    if len(contractions) != n + 1 or len(operators) != n:
        raise InputError(f"An order-{n} integral needs {n + 1} contractions and {n} operators, "
                         f"got {len(contractions)} and {len(operators)}")
    contractions = [as_square(T, f"T_{i + 1}") for i, T in enumerate(contractions)]
    operators = [as_square(Q, f"Q_{i + 1}") for i, Q in enumerate(operators)]
    shapes = {M.shape for M in contractions + operators}
    if len(shapes) != 1:
        raise InputError(f"Operands have mismatched shapes: {sorted(shapes)}")
    shape = shapes.pop()

    top = expansion.max_exponent
    tables = [matrix_power_table(T, top) for T in contractions]

    result = np.zeros(shape, dtype=np.complex128)
    for coeff, exps in expansion.terms:
        word = tables[0][exps[0]]
        for Q, table, a in zip(operators, tables[1:], exps[1:]):
            word = word @ Q @ table[a]
        result += coeff * word
    return result


def _torus_points(order):
    if order == 1:
        circle = np.exp(2j * np.pi * np.arange(REPRESENTATION_GRID) / REPRESENTATION_GRID)
        zeta, tau = np.meshgrid(circle, circle, indexing="ij")
        return np.stack([zeta.ravel(), tau.ravel()])
    rng = np.random.default_rng(REPRESENTATION_SEED)
    angles = rng.uniform(0.0, 2 * np.pi, size=(order + 1, REPRESENTATION_SAMPLES))
    return np.exp(1j * angles)


def pointwise_disagreement(rep_a, rep_b):
    """Max |rep_a - rep_b| on a 32 x 32 torus grid (order 1) or on seeded torus samples."""
    if rep_a.order != rep_b.order:
        raise PreconditionViolation(
            f"Representations have different orders {rep_a.order} and {rep_b.order}")
    points = _torus_points(rep_a.order)
    return float(np.max(np.abs(rep_a.evaluate(points) - rep_b.evaluate(points))))


def moi_representation_check(rep_a, rep_b, contractions, operators,
                             agreement=DEFAULT_TOLERANCES.diagonal):
    """
    ||MOI(rep_a) - MOI(rep_b)|| after checking that the two expansions
    represent the same function.
    """
    disagreement = pointwise_disagreement(rep_a, rep_b)
    if disagreement > agreement:
        raise PreconditionViolation(
            f"Representations differ as functions: max pointwise gap {disagreement:.3e}")
    return operator_norm(moi_tensor(rep_a, contractions, operators)
                         - moi_tensor(rep_b, contractions, operators))


def representation_independence_check(rep_a, rep_b, T, Q, R):
    return moi_representation_check(rep_a, rep_b, [T, R], [Q])


def doi_s2_bound_margin(Phi, T, Q, R, N=None):
    """
    (||DOI||_S2, sup over atom pairs |Phi| * ||Q||_S2).
    """
    result, kernel = _doi_parts(Phi, T, Q, R, N, None, None)
    return hs_norm(result), float(np.max(np.abs(kernel))) * hs_norm(Q)


def doi_s2_bound_check(Phi, T, Q, R, N=None, slack=DEFAULT_TOLERANCES.doi_dual):
    lhs, rhs = doi_s2_bound_margin(Phi, T, Q, R, N)
    return lhs <= rhs + slack
