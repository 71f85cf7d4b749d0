"""
Atomic semi-spectral measures on the unit circle.

The measure of a contraction T is the compression to H of the spectral
measure of a power dilation U: each eigenvalue of U becomes an atom whose
weight is the compressed spectral projection. Moments are exact up to the
fidelity degree of the dilation.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.linalg.matcore import (adjoint, as_matrix, as_square, frozen, operator_norm,
                                principal_argument, unitary_eig)
from src.utils.config_utils import DEFAULT_TOLERANCES
from src.utils.errors import EvaluationError, InputError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralAtom:
    point: complex
    weight: np.ndarray


@dataclass(frozen=True)
class AtomicSemiSpectralMeasure:
    """
    Finite list of (unit-circle point, PSD weight) pairs with total mass I.
    """
    atoms: tuple
    dim: int
    degree: int

    @property
    def points(self):
        return np.array([atom.point for atom in self.atoms], dtype=np.complex128)

    @property
    def weights(self):
        return np.array([atom.weight for atom in self.atoms], dtype=np.complex128)

    def total_mass(self):
        return self.weights.sum(axis=0)

    def check_axioms(self):
        """
        Return (psd_violation, mass_error): the most negative weight eigenvalue
        (0 if all are PSD within Hermitian symmetrisation) and ||sum w - I||.
        """
        psd_violation = 0.0
        for atom in self.atoms:
            hermitian = (atom.weight + adjoint(atom.weight)) / 2
            smallest = float(np.linalg.eigvalsh(hermitian).min())
            psd_violation = max(psd_violation, -smallest)
        mass_error = operator_norm(self.total_mass() - np.eye(self.dim))
        return psd_violation, mass_error


def _arc_distance(a, b):
    return abs(np.angle(b / a))


def _merge_eigenpairs(eigenvalues, compressed_vectors, merge_arc):
    """
    Group eigenvalues (sorted by argument) lying within merge_arc of the
    previous member of their group, wrapping around at 2pi, and sum the
    rank-one weights a a* of each group.
    """
    groups = []
    for value, vector in zip(eigenvalues, compressed_vectors):
        contribution = np.outer(vector, np.conj(vector))
        if groups and _arc_distance(groups[-1][2], value) < merge_arc:
            group = groups[-1]
            group[0].append(value)
            group[1] += contribution
            group[2] = value
        else:
            groups.append([[value], contribution, value])

    # the last group may continue across the 0 = 2pi seam
    if len(groups) > 1 and _arc_distance(groups[-1][2], groups[0][0][0]) < merge_arc:
        last = groups.pop()
        groups[0][0][:0] = last[0]
        groups[0][1] = groups[0][1] + last[1]

    atoms = []
    for members, weight, _ in groups:
        mean = np.mean(members)
        point = mean / abs(mean)
        weight = (weight + adjoint(weight)) / 2
        atoms.append(SpectralAtom(point=complex(point), weight=frozen(weight)))

    merged = len(eigenvalues) - len(atoms)
    if merged:
        logger.debug("semispectral: merged %d eigenvalues into neighbouring atoms", merged)
    atoms.sort(key=lambda atom: float(principal_argument(atom.point)))
    return tuple(atoms)


def semispectral_from_dilation(dilation, merge_arc=DEFAULT_TOLERANCES.merge_arc):
    """
    Compress the spectral measure of dilation.unitary onto H.
    """
    system = unitary_eig(dilation.unitary)
    d = dilation.base_dim
    compressed_vectors = system.eigenvectors[:d, :].T
    atoms = _merge_eigenpairs(system.eigenvalues, compressed_vectors, merge_arc)
    logger.debug("semispectral_from_dilation: %d atoms from a %d-dimensional dilation",
                 len(atoms), dilation.dim)
    return AtomicSemiSpectralMeasure(atoms=atoms, dim=d, degree=dilation.degree)


def _values_at(f, points):
    try:
        values = np.asarray(f(points), dtype=np.complex128)
    except Exception as exc:
        raise EvaluationError(f"Integrand could not be evaluated at the atoms: {exc}")
    if values.shape == ():
        values = np.full(points.shape, values)
    if values.shape != points.shape:
        raise EvaluationError(
            f"Integrand returned shape {values.shape} for {points.shape[0]} atoms")
    if not np.all(np.isfinite(values)):
        raise EvaluationError("Integrand is undefined (non-finite) at an atom")
    return values


def integrate(measure, f):
    """
    Sum of f(point) * weight over the atoms.

    f is called once with the array of atom points and must return an array of
    the same shape (numpy ufunc style).
    """
    values = _values_at(f, measure.points)
    return np.tensordot(values, measure.weights, axes=(0, 0))


def moment_residual(measure, T, n_max):
    """
    max over 0 <= n <= n_max of ||integral zeta^n dE - T^n||.
    """
    if n_max > measure.degree:
        raise ParameterError(
            f"n_max = {n_max} exceeds the fidelity degree {measure.degree} of the measure")
    if n_max < 0:
        raise ParameterError(f"n_max must be non-negative, got {n_max}")
    T = as_square(T, "T")
    if T.shape[0] != measure.dim:
        raise InputError(f"T has dimension {T.shape[0]}, measure has dimension {measure.dim}")

    residual = 0.0
    T_power = np.eye(measure.dim, dtype=np.complex128)
    for n in range(n_max + 1):
        moment = integrate(measure, lambda z, n=n: z ** n)
        residual = max(residual, operator_norm(moment - T_power))
        T_power = T_power @ T
    return residual


def measure_from_atoms(points, weights, degree):
    """
    Build a measure from explicit atoms (used by deserialisation and tests).
    """
    weights = [as_matrix(w, "weight") for w in weights]
    if len(points) != len(weights) or not weights:
        raise InputError("A measure needs the same positive number of points and weights")
    dim = weights[0].shape[0]
    atoms = []
    for point, weight in zip(points, weights):
        if weight.shape != (dim, dim):
            raise InputError(f"Weight has shape {weight.shape}, expected {(dim, dim)}")
        atoms.append(SpectralAtom(point=complex(point), weight=frozen(weight)))
    return AtomicSemiSpectralMeasure(atoms=tuple(atoms), dim=dim, degree=int(degree))
