"""
Test polynomial evaluation at contractions, Cesaro means and von Neumann's inequality
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, sampled_from
from scipy.special import spence

from src.functions.analytic import (DISK_ALGEBRA_CATALOGUE, AnalyticFunction, cesaro_error,
                                    cesaro_mean, cesaro_truncation, circle_sup_norm,
                                    default_grid, eval_on_contraction, eval_via_dilation,
                                    von_neumann_residual)
from src.simulation.case_generator import (CONTRACTION_MODES, contraction_from_rng,
                                           random_polynomial)
from src.utils.errors import ContractViolation, InputError, ParameterError


def test_eval_examples(contraction):
    T = contraction(3)
    assert np.allclose(eval_on_contraction(AnalyticFunction.monomial(1), T), T)

    nilpotent = np.array([[0, 1], [0, 0]])
    assert np.allclose(eval_on_contraction(AnalyticFunction([1, 0, 1]), nilpotent), np.eye(2))

    assert eval_on_contraction(AnalyticFunction.monomial(3), [[0.5]])[0, 0] == pytest.approx(0.125)


def test_eval_requires_contraction():
    with pytest.raises(ContractViolation):
        eval_on_contraction(AnalyticFunction([0, 1]), 2 * np.eye(2))


def test_analytic_function_validation():
    with pytest.raises(InputError):
        AnalyticFunction([1.0, np.nan])
    with pytest.raises(InputError):
        AnalyticFunction(np.ones((2, 2)))
    phi = AnalyticFunction([1, 2, 0, 0])
    assert phi.degree == 1
    assert AnalyticFunction([0, 0]).degree == 0


def test_arithmetic():
    phi = AnalyticFunction([1, 1])
    psi = AnalyticFunction([0, 0, 2])
    assert np.allclose((phi * psi).trimmed_coefficients(), [0, 0, 2, 2])
    assert np.allclose((phi + psi).trimmed_coefficients(), [1, 1, 2])
    assert np.allclose(psi.derivative().trimmed_coefficients(), [0, 4])
    assert phi(2.0) == pytest.approx(3.0)


def test_boundary_values_match_direct_evaluation():
    phi = AnalyticFunction([1, -2j, 0.5, 3])
    grid = 16
    points = np.exp(2j * np.pi * np.arange(grid) / grid)
    assert np.allclose(phi.boundary_values(grid), phi(points))
    # degree above the grid size folds onto the roots of unity
    long = AnalyticFunction.monomial(20)
    assert np.allclose(long.boundary_values(grid), points ** 20)


@pytest.mark.parametrize(
    "coefficients, n, expected",
    [
        ([0, 1], 1, [0, 0.5]),
        ([2, 3, 4], 3, [2, 2.25, 2]),
        ([1, 1, 1, 1], 1, [1, 0.5]),
    ]
)
def test_cesaro_mean(coefficients, n, expected):
    mean = cesaro_mean(AnalyticFunction(coefficients), n)
    assert np.allclose(mean.trimmed_coefficients(), expected)


def test_cesaro_mean_converges_for_monomial():
    phi = AnalyticFunction.monomial(5)
    error = np.max(np.abs(cesaro_mean(phi, 6000).boundary_values(4096) - phi.boundary_values(4096)))
    assert error < 1e-3


def test_cesaro_mean_rejects_negative_index():
    with pytest.raises(ParameterError):
        cesaro_mean(AnalyticFunction([1]), -1)


def test_default_grid():
    assert default_grid(0) == 64
    assert default_grid(1) == 128
    assert default_grid(10) == 1024


def test_circle_sup_norm_refines_off_grid_maximum():
    # maximum 2 at an angle that is not a grid point
    phi = AnalyticFunction([1, np.exp(-0.0123j)])
    assert circle_sup_norm(phi, refine=0) < 2.0
    assert circle_sup_norm(phi) == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_von_neumann_monomials(k, contraction):
    T = contraction(4)
    assert von_neumann_residual(AnalyticFunction.monomial(k), T) <= 1e-12


def test_von_neumann_at_identity():
    phi = AnalyticFunction([1, 1, 1])
    assert abs(von_neumann_residual(phi, [[1.0]])) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 6), integers(0, 8), sampled_from(CONTRACTION_MODES))
def test_von_neumann_random(seed, dim, degree, mode):
    rng = np.random.default_rng(seed)
    phi = random_polynomial(rng, degree)
    T = contraction_from_rng(rng, dim, mode)
    assert von_neumann_residual(phi, T) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 5))
def test_multiplicativity(seed, dim):
    rng = np.random.default_rng(seed)
    phi = random_polynomial(rng, int(rng.integers(0, 6)))
    psi = random_polynomial(rng, int(rng.integers(0, 6)))
    T = contraction_from_rng(rng, dim)
    product = eval_on_contraction(phi * psi, T)
    assert np.allclose(product, eval_on_contraction(phi, T) @ eval_on_contraction(psi, T),
                       atol=1e-9)


def test_dilation_route_matches_horner(rng, contraction):
    phi = random_polynomial(rng, 7)
    T = contraction(5)
    assert np.allclose(eval_via_dilation(phi, T), eval_on_contraction(phi, T), atol=1e-9)


def test_catalogue_closed_forms():
    z = np.array([0.5 + 0j, -0.3 + 0.4j])
    dilog = DISK_ALGEBRA_CATALOGUE["dilog"]
    assert np.allclose(dilog.closed_form(z), dilog.taylor_polynomial(200)(z), atol=1e-12)
    assert dilog.closed_form(np.array([0.5]))[0] == pytest.approx(
        np.pi ** 2 / 12 - np.log(2) ** 2 / 2, abs=1e-12)
    assert np.allclose(spence(1 - z), dilog.closed_form(z))

    exp = DISK_ALGEBRA_CATALOGUE["exp"]
    assert np.allclose(exp.taylor_polynomial(30)(z), np.exp(z), atol=1e-14)


def test_cesaro_truncation_is_minimal():
    f = DISK_ALGEBRA_CATALOGUE["exp"]
    mean, n = cesaro_truncation(f, tol=1e-2)
    assert mean.degree <= n
    assert cesaro_error(f, n) <= 1e-2
    assert n > 1
    assert cesaro_error(f, n - 1) > 1e-2


def test_cesaro_truncation_gives_up():
    with pytest.raises(ParameterError):
        cesaro_truncation(DISK_ALGEBRA_CATALOGUE["exp"], tol=1e-3, max_degree=8)
