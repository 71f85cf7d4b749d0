"""
Test the random case generators
"""
import numpy as np
import pytest

from src.linalg.matcore import is_contraction, operator_norm, unitarity_defect
from src.simulation.case_generator import (CaseGenerator, contraction_from_rng, haar_unitary,
                                           random_contraction, random_polynomial)
from src.utils.errors import ParameterError


@pytest.mark.parametrize("dim", [1, 2, 5, 8])
def test_contraction_modes(rng, dim):
    strict = contraction_from_rng(rng, dim, "strict")
    assert is_contraction(strict) and operator_norm(strict) <= 0.9 + 1e-12
    assert operator_norm(contraction_from_rng(rng, dim, "boundary")) == pytest.approx(1.0)
    assert unitarity_defect(contraction_from_rng(rng, dim, "unitary")) <= 1e-12


def test_contraction_argument_errors(rng):
    with pytest.raises(ParameterError):
        contraction_from_rng(rng, 0)
    with pytest.raises(ParameterError):
        contraction_from_rng(rng, 2, "hermitian")


def test_random_contraction_is_deterministic():
    assert np.array_equal(random_contraction(7, 3), random_contraction(7, 3))
    assert not np.array_equal(random_contraction(7, 3), random_contraction(8, 3))
    for seed in (-1, 1.5):
        with pytest.raises(ParameterError):
            random_contraction(seed, 3)


def test_haar_unitary_phases(rng):
    U = haar_unitary(rng, 4)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)


def test_random_polynomial_degree(rng):
    for degree in (0, 1, 7):
        assert random_polynomial(rng, degree).degree == degree


def test_case_streams_are_independent_of_order():
    generator = CaseGenerator(11, dims=(2, 4), degrees=(1, 5))
    forward = [generator.operator(generator.rng(i), 3) for i in range(4)]
    backward = [generator.operator(generator.rng(i), 3) for i in reversed(range(4))]
    for a, b in zip(forward, reversed(backward)):
        assert np.array_equal(a, b)


def test_case_ranges(rng):
    generator = CaseGenerator(0, dims=(2, 4), degrees=(3, 5))
    for _ in range(50):
        assert 2 <= generator.dim(rng) <= 4
        assert 3 <= generator.degree(rng) <= 5
        assert generator.degree(rng, 1, 3) == 3
        assert generator.mode(rng) in ("strict", "boundary", "unitary")
    assert operator_norm(generator.operator(rng, 3)) == pytest.approx(1.0)
