"""
The verification suites. Each one draws random inputs per case and checks
one family of identities or inequalities.
"""
import functools
import math

import numpy as np

from src.calculus.contraction_path import ContractionPath
from src.calculus.derivatives import (FIRST_ORDER_STEPS, derivative, derivative_increment_residual,
                                      derivative_report, central_difference_order,
                                      hs_differentiability_report, polynomial_taylor_oracle,
                                      roundoff_floor, second_derivative)
from src.calculus.formulas import (commutator_formula_residual, hs_lipschitz_margin,
                                   increment_formula_residual)
from src.dilation.power_dilation import power_dilation, verify_dilation
from src.dilation.semispectral import moment_residual, semispectral_from_dilation
from src.functions.analytic import (DISK_ALGEBRA_CATALOGUE, cesaro_error, cesaro_truncation,
                                    von_neumann_residual)
from src.functions.besov import (TrigPolynomial, besov_norm, dyadic_weight, lp_decompose,
                                 riesz_project)
from src.functions.divided_differences import tensor_expansion
from src.integrals.kernels import DiagonalPolicy, DividedDifferenceKernel
from src.integrals.operator_integrals import (doi_dilation, doi_s2_bound_margin, doi_tensor,
                                              representation_independence_check)
from src.linalg.matcore import hs_norm, operator_norm, unitarity_defect
from src.verification.suite import SuiteCheck, VerificationSuite

# every CATALOGUE_EVERY-th case uses a Cesaro mean of a non-polynomial function
CATALOGUE_EVERY = 25
CATALOGUE_TOLERANCE = 1e-1
FINE_FIRST_ORDER_STEPS = (1e-3, 1e-4, 1e-5)
MIN_DIFFERENCE_ORDER = 1.9
MIN_HS_ORDER = 0.95
MONOMIAL_TABLE = range(1, 65)
PARTITION_LIMIT = 1 << 16
BESOV_PARAMETERS = ((1, math.inf, 1), (2, math.inf, 1), (1, 2, 2), (0.5, 1, math.inf))
RIESZ_PARAMETERS = ((1, math.inf, 1), (2, math.inf, 1))


@functools.lru_cache(maxsize=None)
def catalogue_truncation(name):
    """(Cesaro mean, truncation degree, achieved sup error) for a catalogue function."""
    f = DISK_ALGEBRA_CATALOGUE[name]
    mean, degree = cesaro_truncation(f, tol=CATALOGUE_TOLERANCE)
    return mean, degree, cesaro_error(f, degree)


def _policy_for(case_id):
    return DiagonalPolicy.DERIVATIVE if case_id % 2 == 0 else DiagonalPolicy.ZERO


def _scaled(residual, reference):
    return residual / max(1.0, reference)


class _FunctionCases(VerificationSuite):
    """Suites that mix random polynomials with truncated catalogue functions."""
    uses_catalogue = False

    def function(self, case_id, rng, low=1, high=None):
        if self.uses_catalogue and case_id % CATALOGUE_EVERY == CATALOGUE_EVERY - 1:
            names = sorted(DISK_ALGEBRA_CATALOGUE)
            name = names[(case_id // CATALOGUE_EVERY) % len(names)]
            mean, degree, error = catalogue_truncation(name)
            return mean, {"function": name, "truncation_degree": degree,
                          "truncation_error": error}
        phi = self.generator.polynomial(rng, low, high)
        return phi, {"function": "random"}

    def path(self, rng, dim):
        T = self.generator.contraction(rng, dim)
        R = self.generator.contraction(rng, dim)
        return ContractionPath(T, R)


class DilationSuite(VerificationSuite):
    name = "dilation"
    tolerance_name = "dilation"
    description = "compressed powers of the power dilation reproduce T^n"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        degree = self.generator.degree(rng, 1, 6)
        mode = self.generator.mode(rng)
        T = self.generator.contraction(rng, dim, mode)
        dilation = power_dilation(T, degree)
        defect = unitarity_defect(dilation.unitary)
        return self.record(case_id, dim, degree, verify_dilation(dilation, T), [T, degree],
                           side_checks=defect <= self.tolerances.unit,
                           mode=mode, unitarity_defect=defect)


class SemispectralSuite(VerificationSuite):
    name = "semispectral"
    tolerance_name = "semispectral"
    description = "PSD weights, unit mass and moments of the semi-spectral measure"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        degree = self.generator.degree(rng, 1, 6)
        mode = self.generator.mode(rng)
        T = self.generator.contraction(rng, dim, mode)
        measure = semispectral_from_dilation(power_dilation(T, degree))
        psd_violation, mass_error = measure.check_axioms()
        moments = moment_residual(measure, T, degree)
        return self.record(case_id, dim, degree, max(moments, psd_violation, mass_error),
                           [T, degree], mode=mode, atoms=len(measure.atoms),
                           psd_violation=psd_violation, mass_error=mass_error)


class VonNeumannSuite(VerificationSuite):
    name = "vn"
    tolerance_name = "vn"
    description = "||phi(T)|| <= sup |phi| on the circle"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi = self.generator.polynomial(rng, 0, 8)
        mode = self.generator.mode(rng)
        T = self.generator.contraction(rng, dim, mode)
        return self.record(case_id, dim, phi.degree, von_neumann_residual(phi, T), [phi, T],
                           mode=mode)


class IncrementSuite(_FunctionCases):
    name = "increment"
    tolerance_name = "increment"
    description = "phi(T) - phi(R) = DOI(D phi; E_T, T - R, E_R), both diagonal policies"
    uses_catalogue = True

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng)
        path = self.path(rng, dim)
        policy = _policy_for(case_id)
        residual = increment_formula_residual(phi, path, policy)
        return self.record(case_id, dim, phi.degree, residual, [phi, path.T, path.R, policy.value],
                           policy=policy.value, **details)


class CommutatorSuite(_FunctionCases):
    name = "commutator"
    tolerance_name = "commutator"
    description = "phi(T)Q - Q phi(T) = DOI(D phi; E_T, TQ - QT, E_T), both diagonal policies"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng)
        T = self.generator.contraction(rng, dim)
        Q = self.generator.operator(rng, dim)
        policy = _policy_for(case_id)
        residual = commutator_formula_residual(phi, T, Q, policy)
        return self.record(case_id, dim, phi.degree, residual, [phi, T, Q, policy.value],
                           policy=policy.value, **details)


class FirstDerivativeSuite(_FunctionCases):
    name = "derivative1"
    tolerance_name = "doi_dual"
    description = "tensor and dilation routes of the first derivative agree; central differences converge"
    uses_catalogue = True

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng)
        path = self.path(rng, dim)
        t = float(rng.uniform(0.1, 0.9))

        formula = derivative(phi, path, t)
        kernel = DividedDifferenceKernel(phi)
        A = path.at(t)
        N = kernel.required_degree
        dual = doi_dilation(kernel, A, path.direction, A, N, right_degree=N + 1)

        steps = FIRST_ORDER_STEPS if phi.degree <= 10 else FINE_FIRST_ORDER_STEPS
        convergence = central_difference_order(phi, path, t, 1, steps)
        converged = convergence.exact or convergence.order >= MIN_DIFFERENCE_ORDER
        return self.record(case_id, dim, phi.degree, operator_norm(formula - dual),
                           [phi, path.T, path.R, t], side_checks=converged,
                           t=t, observed_order=convergence.order, **details)


class SecondDerivativeSuite(_FunctionCases):
    name = "derivative2"
    tolerance_name = "derivative"
    description = "second derivative equals 2 MOI(D^2 phi) and the Taylor oracle"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng, 1, 10)
        path = self.path(rng, dim)
        t = float(rng.uniform(0.1, 0.9))

        formula = second_derivative(phi, path, t)
        oracle = polynomial_taylor_oracle(phi, path, t, 2)
        scale = operator_norm(oracle)
        residual = _scaled(operator_norm(formula - oracle), scale)

        convergence = central_difference_order(phi, path, t, 2)
        converged = convergence.exact or convergence.order >= MIN_DIFFERENCE_ORDER
        identity_gap = _scaled(derivative_increment_residual(phi, path, t), scale)
        side_checks = converged and identity_gap <= self.tolerances.doi_dual
        return self.record(case_id, dim, phi.degree, residual, [phi, path.T, path.R, t],
                           side_checks=side_checks, t=t, observed_order=convergence.order,
                           derivative_increment_residual=identity_gap, **details)


class NthDerivativeSuite(_FunctionCases):
    name = "derivativeN"
    tolerance_name = "derivative"
    description = "n! MOI(D^n phi) equals the noncommutative Taylor oracle, n <= 4"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        n = int(rng.integers(1, 5))
        phi, details = self.function(case_id, rng, 1, 8)
        path = self.path(rng, dim)
        t = float(rng.uniform(0.0, 1.0))
        report = derivative_report(phi, path, t, n)
        residual = _scaled(report.residual, operator_norm(report.oracle_value))
        return self.record(case_id, dim, phi.degree, residual, [phi, path.T, path.R, t, n],
                           n=n, t=t, **details)


class HSLipschitzSuite(_FunctionCases):
    name = "hs-lipschitz"
    tolerance_name = "hs_lipschitz"
    description = "Hilbert-Schmidt Lipschitz estimates for increments and commutators"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng)
        path = self.path(rng, dim)
        Q = self.generator.operator(rng, dim)
        increment_lhs, increment_rhs = hs_lipschitz_margin(phi, path)
        commutator_lhs, commutator_rhs = hs_lipschitz_margin(phi, path, Q)
        residual = max(increment_lhs - increment_rhs, commutator_lhs - commutator_rhs)
        return self.record(case_id, dim, phi.degree, residual, [phi, path.T, path.R, Q],
                           increment_ratio=increment_lhs / increment_rhs if increment_rhs else 0.0,
                           **details)


class HSDifferentiabilitySuite(_FunctionCases):
    name = "hs-diff"
    tolerance_name = "hs_diff"
    description = "difference quotients converge in the Hilbert-Schmidt norm"
    uses_catalogue = True

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng)
        path = self.path(rng, dim)
        report = hs_differentiability_report(phi, path)

        curvature = max(hs_norm(second_derivative(phi, path, 0.0)), 1.0)
        residual = report.residual / (report.steps[-1] * curvature)
        floors = [roundoff_floor(phi, s, 1) for s in report.steps]
        decreasing = all(later <= earlier + floor for earlier, later, floor
                         in zip(report.residuals, report.residuals[1:], floors[1:]))
        ordered = report.observed_order is None or report.observed_order >= MIN_HS_ORDER
        return self.record(case_id, dim, phi.degree, residual, [phi, path.T, path.R],
                           side_checks=decreasing and ordered,
                           observed_order=report.observed_order,
                           residuals=list(report.residuals), **details)


class BesovSuite(VerificationSuite):
    name = "besov"
    tolerance_name = "besov"
    description = "Littlewood-Paley reconstruction and B^s_pq norm axioms"

    def _trig_polynomial(self, rng, bandwidth):
        size = 2 * bandwidth + 1
        coefficients = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)
        return TrigPolynomial(-bandwidth, coefficients)

    def run_case(self, case_id, rng):
        bandwidth = self.generator.degree(rng, 1, None)
        phi = self._trig_polynomial(rng, bandwidth)
        psi = self._trig_polynomial(rng, bandwidth)
        c = complex(rng.standard_normal(), rng.standard_normal())

        rebuilt = lp_decompose(phi).reconstruct()
        reconstruction = max(abs(rebuilt.coefficient(k) - phi.coefficient(k))
                             for k in range(-bandwidth, bandwidth + 1))

        # without frequency -1 the W_0 piece is analytic and P+ keeps it
        without_minus_one = dict(phi.items())
        without_minus_one[-1] = 0.0
        riesz_input = TrigPolynomial.from_mapping(without_minus_one)

        violations = [reconstruction]
        for s, p, q in BESOV_PARAMETERS:
            norm = besov_norm(phi, s, p, q)
            violations.append(_scaled(abs(besov_norm(phi.scaled(c), s, p, q) - abs(c) * norm),
                                      abs(c) * norm))
            triangle = besov_norm(phi + psi, s, p, q) - norm - besov_norm(psi, s, p, q)
            violations.append(_scaled(max(0.0, triangle), norm))
            if not math.isinf(q):
                violations.append(_scaled(max(0.0, besov_norm(phi, s, p, 2 * q) - norm), norm))
        for s, p, q in RIESZ_PARAMETERS:
            norm = besov_norm(riesz_input, s, p, q)
            violations.append(max(0.0, besov_norm(riesz_project(riesz_input), s, p, q) - norm))

        return self.record(case_id, 2 * bandwidth + 1, bandwidth, max(violations), [phi, psi, c],
                           reconstruction_error=reconstruction)

    def monomial_norms(self):
        return [(m, besov_norm(TrigPolynomial(m, [1.0]), 1, math.inf, 1)) for m in MONOMIAL_TABLE]

    def suite_checks(self):
        gap = max(abs(norm - m) for m, norm in self.monomial_norms())
        partition_failures = 0
        for k in range(2, PARTITION_LIMIT + 1):
            m = k.bit_length() - 1
            if sum(dyadic_weight(k, n) for n in range(max(1, m - 1), m + 3)) != 1:
                partition_failures += 1
        return [
            SuiteCheck("monomial_norms", gap, self.tolerance, gap <= self.tolerance),
            SuiteCheck("partition_of_unity", float(partition_failures), 0.0,
                       partition_failures == 0),
        ]

    def extras(self):
        return {"monomial_norms": [{"m": m, "norm": norm} for m, norm in self.monomial_norms()]}


class DoiDualSuite(_FunctionCases):
    name = "doi-dual"
    tolerance_name = "doi_dual"
    description = "dilation and tensor routes of the DOI agree; representation and partition independence"

    def run_case(self, case_id, rng):
        dim = self.generator.dim(rng)
        phi, details = self.function(case_id, rng, 1, 8)
        T = self.generator.contraction(rng, dim)
        R = self.generator.contraction(rng, dim)
        Q = self.generator.operator(rng, dim)
        kernel = DividedDifferenceKernel(phi)
        expansion = tensor_expansion(phi, 1)

        dilation_value = doi_dilation(kernel, T, Q, R)
        dual_gap = operator_norm(dilation_value - doi_tensor(expansion, T, Q, R))

        block_size = int(rng.integers(1, 8))
        partition_gap = operator_norm(doi_dilation(kernel, T, Q, R, block_size=block_size)
                                      - dilation_value)

        regrouped = expansion.split_terms(rng.permutation(2 * len(expansion)))
        representation_gap = representation_independence_check(expansion, regrouped, T, Q, R)

        lhs, rhs = doi_s2_bound_margin(kernel, T, Q, R)
        s2_violation = max(0.0, lhs - rhs)

        residual = max(dual_gap, partition_gap, representation_gap, s2_violation)
        return self.record(case_id, dim, phi.degree, residual, [phi, T, Q, R],
                           dual_gap=dual_gap, partition_gap=partition_gap,
                           representation_gap=representation_gap, s2_violation=s2_violation,
                           block_size=block_size, **details)
