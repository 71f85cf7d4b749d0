"""
Dense complex linear-algebra kernel.

Operators are plain complex128 numpy arrays; `as_matrix` is the single
entry point that validates shape and finiteness. Every function here is
pure and never mutates its arguments.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import (ContractViolation, InputError,
                              NotPositiveSemidefiniteError)

logger = logging.getLogger(__name__)


def as_matrix(M, name="matrix"):
    """
    Convert to a 2-D complex128 array, rejecting non-finite entries.
    """
    try:
        array = np.asarray(M, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not a numeric array: {exc}")
    if array.ndim == 0:
        array = array.reshape(1, 1)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise InputError(f"{name} must be a non-empty 2-D array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InputError(f"{name} has non-finite entries")
    return array


def as_square(M, name="matrix"):
    array = as_matrix(M, name)
    if array.shape[0] != array.shape[1]:
        raise InputError(f"{name} must be square, got shape {array.shape}")
    return array


def frozen(array):
    """Return a read-only view so stored operators stay immutable."""
    view = array.view()
    view.flags.writeable = False
    return view


def adjoint(M):
    return np.conj(M).T


def operator_norm(M):
    """Largest singular value; 0 for the zero matrix."""
    M = as_matrix(M)
    if not np.any(M):
        return 0.0
    return float(np.linalg.norm(M, 2))


def hs_norm(M):
    """Hilbert-Schmidt (Frobenius) norm."""
    M = as_matrix(M)
    return float(np.linalg.norm(M, "fro"))


def is_contraction(T, tol=DEFAULT_TOLERANCES.unit):
    T = as_square(T, "T")
    return operator_norm(T) <= 1.0 + tol


def require_contraction(T, name="T", tol=DEFAULT_TOLERANCES.unit):
    """Validate T and return it as an array, raising if ||T|| > 1 + tol."""
    T = as_square(T, name)
    norm = operator_norm(T)
    if norm > 1.0 + tol:
        raise ContractViolation(f"{name} is not a contraction: ||{name}|| = {norm:.12g}")
    return T


def unitarity_defect(U):
    U = as_square(U, "U")
    return operator_norm(adjoint(U) @ U - np.eye(U.shape[0]))


@dataclass(frozen=True)
class UnitaryEigensystem:
    """
    Eigenvalues (unit modulus, sorted by argument in [0, 2pi)) and the
    orthonormal eigenvector columns of a unitary matrix.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ adjoint(V)


ARGUMENT_WRAP = 1e-12


def principal_argument(z):
    """
    Argument of z mapped into [0, 2pi). Arguments within ARGUMENT_WRAP of
    2pi (points just below the positive real axis) map to 0.
    """
    angles = np.mod(np.angle(z), 2 * np.pi)
    return np.where(angles > 2 * np.pi - ARGUMENT_WRAP, 0.0, angles)


def unitary_eig(U, tol=DEFAULT_TOLERANCES.unit):
    """
    Eigen-decomposition of a unitary matrix through its complex Schur form.

    A unitary matrix is normal, so its Schur factor is diagonal up to
    rounding and the Schur vectors are an orthonormal eigenbasis.
    """
    U = as_square(U, "U")
    dim = U.shape[0]
    defect = unitarity_defect(U)
    if defect > tol:
        raise ContractViolation(f"U is not unitary: ||U*U - I|| = {defect:.3e} > {tol:.1e}")

    schur_form, Z = scipy.linalg.schur(U, output="complex")
    eigenvalues = np.diag(schur_form).copy()
    # project back onto the circle; the off-diagonal Schur residue is O(eps)
    eigenvalues /= np.abs(eigenvalues)

    order = np.argsort(principal_argument(eigenvalues), kind="stable")
    eigenvalues = eigenvalues[order]
    Z = Z[:, order]

    system = UnitaryEigensystem(frozen(eigenvalues), frozen(Z))

    tol_recon = DEFAULT_TOLERANCES.recon(dim)
    orth_error = operator_norm(adjoint(Z) @ Z - np.eye(dim))
    recon_error = operator_norm(system.reconstruct() - U)
    if orth_error > DEFAULT_TOLERANCES.orth or recon_error > tol_recon:
        raise ContractViolation(
            f"Schur reduction lost accuracy: orthogonality {orth_error:.3e}, "
            f"reconstruction {recon_error:.3e}")

    logger.debug("unitary_eig: dim=%d, orthogonality=%.2e, reconstruction=%.2e",
                 dim, orth_error, recon_error)
    return system


def psd_sqrt(H, tol=DEFAULT_TOLERANCES.unit):
    """
    Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero.
    """
    H = as_square(H, "H")
    asymmetry = operator_norm(H - adjoint(H))
    if asymmetry > tol:
        raise ContractViolation(f"H is not Hermitian: ||H - H*|| = {asymmetry:.3e}")

    H = (H + adjoint(H)) / 2
    eigenvalues, V = scipy.linalg.eigh(H)
    smallest = float(eigenvalues.min())
    if smallest < -tol:
        raise NotPositiveSemidefiniteError(f"H has eigenvalue {smallest:.3e} < -{tol:.1e}")
    if smallest < 0:
        logger.debug("psd_sqrt: clamping eigenvalue %.3e to zero", smallest)

    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    S = (V * roots) @ adjoint(V)
    return (S + adjoint(S)) / 2


def defect_pair(T):
    """
    (D_T, D_{T*}) from one SVD T = W diag(s) V*:

        D_T    = V diag(sqrt(1 - s^2)) V*
        D_{T*} = W diag(sqrt(1 - s^2)) W*

    Sharing the singular vectors makes T D_T = D_{T*} T hold to rounding,
    also when some s are 1 up to rounding (unitary or norm-one T).
    """
    T = as_square(T, "T")
    W, s, Vh = scipy.linalg.svd(T)
    roots = np.sqrt(np.clip(1.0 - s ** 2, 0.0, None))
    D_T = (adjoint(Vh) * roots) @ Vh
    D_T_star = (W * roots) @ adjoint(W)
    return (D_T + adjoint(D_T)) / 2, (D_T_star + adjoint(D_T_star)) / 2


def defect_operator(T):
    """D_T = (I - T*T)^(1/2)."""
    return defect_pair(T)[0]


def matrix_power_table(T, n_max):
    """
    Return [I, T, T^2, ..., T^n_max].
    """
    T = as_square(T, "T")
    powers = [np.eye(T.shape[0], dtype=np.complex128)]
    for _ in range(n_max):
        powers.append(powers[-1] @ T)
    return powers
