"""
Test the Littlewood-Paley decomposition and Besov norms
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from src.functions.analytic import AnalyticFunction
from src.functions.besov import (TrigPolynomial, analytic_characterization_ratio, besov_norm,
                                 besov_terms, dyadic_weight, lp_decompose, riesz_project,
                                 w_weight)
from src.utils.errors import InputError, ParameterError


def _random_trig(rng, bandwidth):
    size = 2 * bandwidth + 1
    return TrigPolynomial(-bandwidth, rng.standard_normal(size) + 1j * rng.standard_normal(size))


@pytest.mark.parametrize(
    "x, expected",
    [
        (1, 1),
        (Fraction(3, 2), Fraction(1, 2)),
        (Fraction(3, 4), Fraction(1, 2)),
        (Fraction(1, 2), 0),
        (2, 0),
        (3, 0),
        (0, 0),
    ]
)
def test_w_weight_exact(x, expected):
    value = w_weight(x)
    assert isinstance(value, Fraction)
    assert value == expected


def test_w_weight_float():
    assert w_weight(1.5) == pytest.approx(0.5)
    assert w_weight(0.75) == pytest.approx(0.5)
    assert w_weight(2.5) == 0.0


def test_partition_of_unity():
    for k in range(2, 1 << 12):
        assert sum(dyadic_weight(k, n) for n in range(1, k.bit_length() + 1)) == 1


def _nonzero_pieces(decomposition):
    return [(n, piece) for n, piece in decomposition.pieces() if np.any(piece.coefficients)]


def test_decompose_z():
    decomposition = lp_decompose(TrigPolynomial(1, [1.0]))
    assert decomposition.analytic_pieces[0].coefficient(1) == 1
    assert [n for n, _ in _nonzero_pieces(decomposition)] == [0]


def test_decompose_z4():
    decomposition = lp_decompose(TrigPolynomial(4, [1.0]))
    nonzero = _nonzero_pieces(decomposition)
    assert len(nonzero) == 1
    assert decomposition.analytic_pieces[2].coefficient(4) == 1


def test_decompose_z3():
    decomposition = lp_decompose(TrigPolynomial(3, [1.0]))
    assert decomposition.analytic_pieces[1].coefficient(3) == 0.5
    assert decomposition.analytic_pieces[2].coefficient(3) == 0.5
    assert decomposition.reconstruct().coefficient(3) == 1


def test_negative_frequencies_go_to_antianalytic_pieces():
    decomposition = lp_decompose(TrigPolynomial(-4, [1.0]))
    assert decomposition.antianalytic_pieces[1].coefficient(-4) == 1
    assert not any(np.any(piece.coefficients) for piece in decomposition.analytic_pieces)


def test_w0_covers_the_three_lowest_frequencies():
    phi = TrigPolynomial(-1, [2.0, 3.0, 4.0])
    decomposition = lp_decompose(phi)
    assert [decomposition.analytic_pieces[0].coefficient(k) for k in (-1, 0, 1)] == [2, 3, 4]
    assert len(_nonzero_pieces(decomposition)) == 1


@settings(max_examples=60, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 80))
def test_reconstruction_is_exact(seed, bandwidth):
    phi = _random_trig(np.random.default_rng(seed), bandwidth)
    rebuilt = lp_decompose(phi).reconstruct()
    for k in range(-bandwidth, bandwidth + 1):
        assert rebuilt.coefficient(k) == phi.coefficient(k)


def test_monomial_norms():
    for m in range(1, 65):
        assert besov_norm(TrigPolynomial(m, [1.0]), 1, math.inf, 1) == pytest.approx(m, abs=1e-9)


@pytest.mark.parametrize("c", [1.0, -2.5, 3j])
def test_constant_norm(c):
    assert besov_norm(TrigPolynomial(0, [c]), 1, math.inf, 1) == pytest.approx(abs(c))


@settings(max_examples=30, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 40))
def test_norm_axioms(seed, bandwidth):
    rng = np.random.default_rng(seed)
    phi, psi = _random_trig(rng, bandwidth), _random_trig(rng, bandwidth)
    c = complex(rng.standard_normal(), rng.standard_normal())
    for s, p, q in [(1, math.inf, 1), (0.5, 2, 2), (2, 1, math.inf)]:
        norm = besov_norm(phi, s, p, q)
        assert besov_norm(phi.scaled(c), s, p, q) == pytest.approx(abs(c) * norm, rel=1e-9)
        assert besov_norm(phi + psi, s, p, q) <= norm + besov_norm(psi, s, p, q) + 1e-9 * norm
        if not math.isinf(q):
            assert besov_norm(phi, s, p, 2 * q) <= norm * (1 + 1e-9)


@pytest.mark.parametrize(
    "phi, expected",
    [
        (TrigPolynomial(-1, [1.0, 1.0, 1.0]), TrigPolynomial(0, [1.0, 1.0])),
        (TrigPolynomial(-3, [1.0, 0.0]), TrigPolynomial(0, [0.0])),
    ]
)
def test_riesz_project_examples(phi, expected):
    projected = riesz_project(phi)
    assert projected.min_k == expected.min_k
    assert np.array_equal(projected.coefficients, expected.coefficients)


def test_riesz_project_keeps_analytic_input():
    phi = TrigPolynomial(2, [1.0, 2.0])
    assert riesz_project(phi) is phi


@settings(max_examples=30, deadline=None)
@given(integers(0, 2**32 - 1), integers(1, 40))
def test_riesz_projection_does_not_increase_norm(seed, bandwidth):
    phi = dict(_random_trig(np.random.default_rng(seed), bandwidth).items())
    phi[-1] = 0.0
    phi = TrigPolynomial.from_mapping(phi)
    for s, p, q in [(1, math.inf, 1), (2, math.inf, 1)]:
        assert besov_norm(riesz_project(phi), s, p, q) <= besov_norm(phi, s, p, q) + 1e-9


def test_riesz_projection_can_grow_the_mixed_low_piece():
    # the W_0 piece mixes z-bar with 1 and z; dropping -z-bar/2 raises the sup
    phi = TrigPolynomial(-1, [-0.5, 1.0, 1.0])
    assert besov_norm(phi, 1, math.inf, 1) == pytest.approx(math.sqrt(3.375), abs=1e-3)
    assert besov_norm(riesz_project(phi), 1, math.inf, 1) > besov_norm(phi, 1, math.inf, 1) + 0.1


def test_besov_parameter_errors():
    phi = TrigPolynomial(0, [1.0, 1.0])
    with pytest.raises(ParameterError):
        besov_norm(phi, 1, 0.5, 1)
    with pytest.raises(ParameterError):
        besov_norm(phi, 1, math.inf, 0)
    with pytest.raises(ParameterError):
        besov_terms(phi, 1, math.inf, grid=16)
    assert besov_norm(phi, 1, "inf", "inf") == pytest.approx(2.0, abs=1e-9)


def test_besov_terms_cover_both_families():
    terms = besov_terms(TrigPolynomial(-5, np.ones(11)), 1, 2)
    families = {family for family, _, _ in terms}
    assert families == {"analytic", "antianalytic"}
    assert min(n for family, n, _ in terms if family == "antianalytic") == 1


def test_trig_polynomial_evaluation():
    phi = TrigPolynomial(-2, [1.0, -1j, 0.0, 2.0, 0.5])
    grid = 32
    points = np.exp(2j * np.pi * np.arange(grid) / grid)
    assert np.allclose(phi.evaluate(grid), phi(points))
    assert phi.bandwidth == 2
    assert not phi.is_analytic()
    assert phi.to_analytic().trimmed_coefficients().tolist() == [0, 2, 0.5]


def test_trig_polynomial_from_analytic():
    phi = TrigPolynomial.from_analytic(AnalyticFunction([1, 2, 3]))
    assert phi.is_analytic()
    assert phi.coefficient(2) == 3 and phi.coefficient(-1) == 0


def test_characterization_single_radius():
    low, high = analytic_characterization_ratio(TrigPolynomial(4, [1.0]), 1, 2, [0.5])
    assert low == high > 0


def test_characterization_ratio_is_stable_across_monomials():
    radii = np.linspace(0.01, 0.99, 99)
    uppers = [analytic_characterization_ratio(TrigPolynomial(m, [1.0]), 1, 2, radii)[1]
              for m in range(2, 33)]
    assert min(uppers) > 0
    assert max(uppers) / min(uppers) <= 100


def test_characterization_degenerate_linear_case():
    assert analytic_characterization_ratio(TrigPolynomial(1, [1.0]), 1, 2, [0.5]) == (0.0, 0.0)


def test_characterization_errors():
    with pytest.raises(InputError):
        analytic_characterization_ratio(TrigPolynomial(-1, [1.0, 1.0]), 1, 2, [0.5])
    with pytest.raises(ParameterError):
        analytic_characterization_ratio(TrigPolynomial(3, [1.0]), 2, 2, [0.5])
    with pytest.raises(ParameterError):
        analytic_characterization_ratio(TrigPolynomial(3, [1.0]), 1, 2, [0.0, 0.5])
    with pytest.raises(ParameterError):
        analytic_characterization_ratio(TrigPolynomial(0, [0.0]), 1, 2, [0.5])
