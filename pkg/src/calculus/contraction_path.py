"""
Affine path between two contractions.
"""
from dataclasses import dataclass

import numpy as np

from src.linalg.matcore import frozen, is_contraction, require_contraction
from src.utils.errors import ContractViolation, InputError

CHECK_POINTS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ContractionPath:
    """
    t -> T_t = (1 - t) T + t R. Every T_t with t in [0, 1] is a contraction.
    """
    T: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        T = require_contraction(self.T, "T")
        R = require_contraction(self.R, "R")
        if T.shape != R.shape:
            raise InputError(f"T and R must have the same shape, got {T.shape} and {R.shape}")
        object.__setattr__(self, "T", frozen(T))
        object.__setattr__(self, "R", frozen(R))
        for t in CHECK_POINTS:
            if not is_contraction(self.at(t)):
                raise ContractViolation(f"T_t is not a contraction at t = {t}")

    @property
    def dim(self):
        return self.T.shape[0]

    @property
    def direction(self):
        """R - T, the velocity of the path."""
        return self.R - self.T

    def at(self, t):
        """T_t; t outside [0, 1] is allowed for finite-difference stencils."""
        return (1 - t) * self.T + t * self.R
