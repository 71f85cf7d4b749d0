"""
Two-variable kernels for double operator integrals.
"""
from enum import Enum

import numpy as np

from src.functions.divided_differences import CONFLUENT_SEPARATION, tensor_expansion
from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import InputError


class DiagonalPolicy(Enum):
    """Value of the divided-difference kernel on the diagonal zeta = tau."""
    DERIVATIVE = "derivative"
    ZERO = "zero"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(policy.value for policy in cls)
            raise InputError(f"Unknown diagonal policy '{value}'. Choose one of: {choices}")


class DividedDifferenceKernel:
    """
    (phi(zeta) - phi(tau)) / (zeta - tau) evaluated in three regimes by the
    separation |zeta - tau|:

        >= CONFLUENT_SEPARATION    plain quotient
        >= diagonal                 first-order tensor expansion
        <  diagonal                 the diagonal policy: phi' at the arc
                                    midpoint, or 0
    """

    def __init__(self, phi, policy=DiagonalPolicy.DERIVATIVE,
                 diagonal=DEFAULT_TOLERANCES.diagonal):
        self.phi = phi
        self.policy = DiagonalPolicy.parse(policy)
        self.diagonal = diagonal
        self.expansion = tensor_expansion(phi, 1)
        self._derivative = phi.derivative()

    @property
    def required_degree(self):
        """Dilation degree that reproduces every monomial of the kernel."""
        return max(1, self.phi.degree)

    def __repr__(self):
        return f"DividedDifferenceKernel({self.phi.label or self.phi.degree}, {self.policy.value})"

    def _diagonal_values(self, zeta, tau):
        if self.policy is DiagonalPolicy.ZERO:
            return np.zeros(zeta.shape, dtype=np.complex128)
        midpoint = zeta + tau
        midpoint = midpoint / np.abs(midpoint)
        return self._derivative(midpoint)

    def __call__(self, zeta, tau):
        zeta, tau = np.broadcast_arrays(np.asarray(zeta, dtype=np.complex128),
                                        np.asarray(tau, dtype=np.complex128))
        gap = np.abs(zeta - tau)
        values = np.empty(zeta.shape, dtype=np.complex128)

        far = gap >= CONFLUENT_SEPARATION
        if np.any(far):
            values[far] = (self.phi(zeta[far]) - self.phi(tau[far])) / (zeta[far] - tau[far])

        near = ~far & (gap >= self.diagonal)
        if np.any(near):
            values[near] = self.expansion.evaluate(np.stack([zeta[near], tau[near]]))

        on_diagonal = gap < self.diagonal
        if np.any(on_diagonal):
            values[on_diagonal] = self._diagonal_values(zeta[on_diagonal], tau[on_diagonal])
        return values


def separable_kernel(f, g):
    """Phi(zeta, tau) = f(zeta) g(tau)."""
    def kernel(zeta, tau):
        return np.asarray(f(zeta)) * np.asarray(g(tau))
    return kernel
