"""
Finite unitary power dilations of a contraction.

For a contraction T on H = C^d and a fidelity degree N the unitary U acts on
K = H^(N+1) (N+1 blocks of size d) and satisfies T^n = P_H U^n |H for
0 <= n <= N. H sits in the first block.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.linalg.matcore import (adjoint, as_square, defect_pair, frozen,
                                operator_norm, require_contraction, unitarity_defect)
from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import ContractViolation, InputError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerDilation:
    """
    A unitary on d*(N+1) coordinates whose leading d x d block of U^n
    reproduces T^n for every n up to `degree`.
    """
    unitary: np.ndarray
    base_dim: int
    degree: int

    @property
    def dim(self):
        return self.unitary.shape[0]

    @property
    def embedding(self):
        """Coordinates of H inside K."""
        return slice(0, self.base_dim)

    def compress(self, M):
        h = self.embedding
        return M[h, h]

    def embed(self, Q):
        """iota Q pi: Q placed on the H block, zero elsewhere."""
        Q = np.asarray(Q, dtype=np.complex128)
        d = self.base_dim
        if Q.shape != (d, d):
            raise InputError(f"Q must be {d}x{d}, got {Q.shape}")
        enlarged = np.zeros((self.dim, self.dim), dtype=np.complex128)
        enlarged[self.embedding, self.embedding] = Q
        return enlarged

    def compressed_powers(self, n_max):
        """[P_H U^n |H for n = 0..n_max]."""
        result = []
        power = np.eye(self.dim, dtype=np.complex128)
        for _ in range(n_max + 1):
            result.append(self.compress(power))
            power = self.unitary @ power
        return result


def power_dilation(T, N):
    """
    Block-cyclic unitary dilation of T with fidelity degree N.

    Block layout (indices 0..N):
        U[0][0] = T,    U[0][N] = D_{T*}
        U[1][0] = D_T,  U[1][N] = -T*
        U[j+1][j] = I   for 1 <= j <= N-1
    """
    if int(N) != N or N < 1:
        raise ParameterError(f"Dilation degree must be a positive integer, got {N}")
    N = int(N)
    T = require_contraction(T)
    d = T.shape[0]

    D_T, D_T_star = defect_pair(T)

    size = d * (N + 1)
    U = np.zeros((size, size), dtype=np.complex128)

    def block(i, j):
        return (slice(i * d, (i + 1) * d), slice(j * d, (j + 1) * d))

    U[block(0, 0)] = T
    U[block(0, N)] = D_T_star
    U[block(1, 0)] = D_T
    U[block(1, N)] = -adjoint(T)
    for j in range(1, N):
        U[block(j + 1, j)] = np.eye(d)

    defect = unitarity_defect(U)
    if defect > DEFAULT_TOLERANCES.unit:
        # only reachable for ||T|| slightly above 1, where 1 - s^2 is clamped
        raise ContractViolation(f"Dilation is not unitary: ||U*U - I|| = {defect:.3e}")

    logger.debug("power_dilation: d=%d, N=%d, size=%d, unitarity defect=%.2e",
                 d, N, size, defect)
    return PowerDilation(unitary=frozen(U), base_dim=d, degree=N)


def halmos_dilation(T):
    """The 2x2 block unitary [[T, D_T*], [D_T, -T*]]."""
    return power_dilation(T, 1)


def verify_dilation(dilation, T):
    """
    Max over 0 <= n <= degree of ||P_H U^n |H - T^n||.
    """
    T = as_square(T, "T")
    if T.shape[0] != dilation.base_dim or dilation.unitary.shape != (dilation.dim, dilation.dim):
        raise InputError(
            f"T has dimension {T.shape[0]} but the dilation embeds dimension {dilation.base_dim}")

    max_error = 0.0
    T_power = np.eye(T.shape[0], dtype=np.complex128)
    for compressed in dilation.compressed_powers(dilation.degree):
        max_error = max(max_error, operator_norm(compressed - T_power))
        T_power = T_power @ T
    return max_error
