"""
Test power dilations and the semi-spectral measures they induce
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, sampled_from

from src.dilation.power_dilation import (PowerDilation, halmos_dilation, power_dilation,
                                         verify_dilation)
from src.dilation.semispectral import (integrate, measure_from_atoms, moment_residual,
                                       semispectral_from_dilation)
from src.functions.analytic import AnalyticFunction, eval_on_contraction
from src.linalg.matcore import defect_operator, operator_norm, unitarity_defect
from src.simulation.case_generator import CONTRACTION_MODES, contraction_from_rng, haar_unitary
from src.utils.errors import ContractViolation, EvaluationError, InputError, ParameterError

SQRT_075 = np.sqrt(0.75)


@pytest.mark.parametrize(
    "T, expected",
    [
        ([[0.0]], [[0, 1], [1, 0]]),
        ([[1.0]], [[1, 0], [0, -1]]),
        ([[0.5]], [[0.5, SQRT_075], [SQRT_075, -0.5]]),
    ]
)
def test_halmos_dilation(T, expected):
    dilation = halmos_dilation(T)
    assert dilation.degree == 1
    assert np.allclose(dilation.unitary, expected, atol=1e-12)


def test_power_dilation_degree_one_is_halmos(contraction):
    T = contraction(3)
    assert np.array_equal(power_dilation(T, 1).unitary, halmos_dilation(T).unitary)


def test_scalar_power_dilation_reproduces_powers():
    dilation = power_dilation([[0.5]], 3)
    assert dilation.unitary.shape == (4, 4)
    for n, compressed in enumerate(dilation.compressed_powers(3)):
        assert compressed[0, 0] == pytest.approx(0.5 ** n, abs=1e-12)


def test_unitary_input_decouples(rng):
    T = haar_unitary(rng, 3)
    dilation = power_dilation(T, 4)
    assert np.allclose(dilation.unitary[:3, 3:], 0, atol=1e-7)
    assert verify_dilation(dilation, T) <= 1e-10


def test_corrupted_dilation_is_detected(contraction):
    T = contraction(3)
    dilation = power_dilation(T, 3)
    corrupted = np.array(dilation.unitary)
    corrupted[:3, :3] = 0
    broken = PowerDilation(unitary=corrupted, base_dim=3, degree=3)
    assert verify_dilation(broken, T) > 0.1


def test_zero_contraction_and_degree_sharpness():
    dilation = power_dilation([[0.0]], 2)
    powers = dilation.compressed_powers(3)
    assert verify_dilation(dilation, [[0.0]]) <= 1e-12
    assert abs(powers[2][0, 0]) <= 1e-12
    # one step past the fidelity degree the cycle closes
    assert abs(powers[3][0, 0]) > 0.5


def test_power_dilation_errors(contraction):
    with pytest.raises(ParameterError):
        power_dilation(contraction(2), 0)
    with pytest.raises(ContractViolation):
        power_dilation(2 * np.eye(2), 2)
    with pytest.raises(InputError):
        verify_dilation(power_dilation(contraction(2), 2), np.eye(3))


def test_embed_places_q_on_first_block(contraction):
    dilation = power_dilation(contraction(2), 2)
    Q = np.array([[1, 2], [3, 4]])
    enlarged = dilation.embed(Q)
    assert enlarged.shape == (6, 6)
    assert np.array_equal(enlarged[:2, :2], Q)
    assert not np.any(enlarged[2:, :]) and not np.any(enlarged[:, 2:])
    assert np.array_equal(dilation.compress(enlarged), Q)
    assert dilation.embedding == slice(0, 2)


@pytest.mark.parametrize("mode", ["boundary", "unitary"])
def test_norm_one_inputs_dilate(mode):
    for seed in range(50):
        T = contraction_from_rng(np.random.default_rng(seed), 4, mode)
        dilation = power_dilation(T, 2)
        assert unitarity_defect(dilation.unitary) <= 1e-12
        assert verify_dilation(dilation, T) <= 1e-10


@settings(max_examples=80, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 6), integers(1, 6), sampled_from(CONTRACTION_MODES))
def test_random_dilations(seed, dim, degree, mode):
    T = contraction_from_rng(np.random.default_rng(seed), dim, mode)
    dilation = power_dilation(T, degree)
    assert unitarity_defect(dilation.unitary) <= 1e-10
    assert verify_dilation(dilation, T) <= 1e-9


def test_defect_intertwining(contraction):
    T = contraction(4)
    gap = T @ defect_operator(T) - defect_operator(T.conj().T) @ T
    assert operator_norm(gap) <= 1e-9


def _atoms(measure):
    return [(atom.point, atom.weight) for atom in measure.atoms]


@pytest.mark.parametrize(
    "t, weights",
    [
        (0.5, (0.75, 0.25)),
        (0.0, (0.5, 0.5)),
    ]
)
def test_scalar_measures(t, weights):
    measure = semispectral_from_dilation(power_dilation([[t]], 1))
    (p1, w1), (p2, w2) = _atoms(measure)
    assert p1 == pytest.approx(1.0, abs=1e-12)
    assert p2 == pytest.approx(-1.0, abs=1e-12)
    assert w1[0, 0] == pytest.approx(weights[0], abs=1e-12)
    assert w2[0, 0] == pytest.approx(weights[1], abs=1e-12)
    assert integrate(measure, lambda z: z)[0, 0] == pytest.approx(t, abs=1e-12)


def test_unitary_measure_has_idempotent_weights():
    T = np.diag(np.exp([0.3j, 2.0j]))
    measure = semispectral_from_dilation(power_dilation(T, 2))
    for _, weight in _atoms(measure):
        assert np.allclose(weight @ weight, weight, atol=1e-7)
    assert np.allclose(integrate(measure, np.conj), T.conj().T, atol=1e-7)


def test_integrate_examples(contraction):
    T = contraction(3)
    measure = semispectral_from_dilation(power_dilation(T, 4))
    assert np.allclose(integrate(measure, lambda z: np.ones_like(z)), np.eye(3), atol=1e-10)
    for n in range(5):
        assert np.allclose(integrate(measure, lambda z, n=n: z ** n),
                           np.linalg.matrix_power(T, n), atol=1e-9)


def test_integrate_rejects_non_finite_integrand(contraction):
    measure = semispectral_from_dilation(power_dilation(contraction(2), 2))
    with pytest.raises(EvaluationError):
        integrate(measure, lambda z: np.full(z.shape, np.nan))
    with pytest.raises(EvaluationError):
        integrate(measure, lambda z: z[:1])


def test_moment_residual(contraction):
    T = contraction(3)
    measure = semispectral_from_dilation(power_dilation(T, 3))
    assert moment_residual(measure, T, 3) <= 1e-9
    assert moment_residual(measure, T, 0) <= 1e-10

    weights = [np.array(atom.weight) for atom in measure.atoms]
    weights[0][0, 0] += 0.01
    perturbed = measure_from_atoms(measure.points, weights, measure.degree)
    assert moment_residual(perturbed, T, 3) >= 0.005

    with pytest.raises(ParameterError):
        moment_residual(measure, T, 4)


@settings(max_examples=60, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 6), integers(1, 6), sampled_from(CONTRACTION_MODES))
def test_measure_axioms(seed, dim, degree, mode):
    T = contraction_from_rng(np.random.default_rng(seed), dim, mode)
    measure = semispectral_from_dilation(power_dilation(T, degree))
    psd_violation, mass_error = measure.check_axioms()
    assert psd_violation <= 1e-10
    assert mass_error <= 1e-10
    assert moment_residual(measure, T, degree) <= 1e-9


def test_moments_do_not_depend_on_the_dilation(contraction):
    T = contraction(3)
    low = semispectral_from_dilation(power_dilation(T, 3))
    high = semispectral_from_dilation(power_dilation(T, 5))
    assert len(low.atoms) != len(high.atoms)
    for n in range(4):
        assert np.allclose(integrate(low, lambda z, n=n: z ** n),
                           integrate(high, lambda z, n=n: z ** n), atol=1e-9)


def test_polynomial_integral_matches_horner(rng, contraction):
    T = contraction(4)
    phi = AnalyticFunction(rng.standard_normal(6) + 1j * rng.standard_normal(6))
    measure = semispectral_from_dilation(power_dilation(T, phi.degree))
    assert np.allclose(integrate(measure, phi), eval_on_contraction(phi, T), atol=1e-9)
