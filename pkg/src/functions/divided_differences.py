"""
Divided differences of all orders and their elementary-tensor expansions.

For a polynomial phi the k-th divided difference is again a polynomial:

    D^k(z^m)(x_1, ..., x_{k+1}) = sum over a_1 + ... + a_{k+1} = m - k of
                                  x_1^a_1 * ... * x_{k+1}^a_{k+1}

so it is a finite sum of products of monomials, one factor per variable.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from src.utils.errors import InputError, ParameterError

# below this separation the recursive quotient loses digits; the tensor
# expansion is used instead
CONFLUENT_SEPARATION = 1e-4


@dataclass(frozen=True)
class TensorExpansion:
    """
    sum_j coeff_j * prod_i x_i ** exps_j[i], with k + 1 variables.

    Exponent tuples may repeat; equal tuples are not merged.
    """
    order: int
    terms: tuple

    def __post_init__(self):
        for coeff, exps in self.terms:
            if len(exps) != self.order + 1:
                raise InputError(
                    f"Exponent tuple {exps} has length {len(exps)}, expected {self.order + 1}")
            if any(a < 0 for a in exps):
                raise InputError(f"Exponent tuple {exps} has a negative entry")

    @classmethod
    def from_terms(cls, order, terms):
        return cls(order, tuple((complex(c), tuple(int(a) for a in exps)) for c, exps in terms))

    def __len__(self):
        return len(self.terms)

    @property
    def max_exponent(self):
        return max((max(exps) for _, exps in self.terms), default=0)

    def evaluate(self, points):
        """
        Evaluate at one point (a sequence of order + 1 numbers) or at a batch
        given as an array of shape (order + 1, ...).
        """
        points = np.asarray(points, dtype=np.complex128)
        if points.shape[0] != self.order + 1:
            raise InputError(f"Expected {self.order + 1} coordinates, got {points.shape[0]}")
        total = np.zeros(points.shape[1:], dtype=np.complex128)
        for coeff, exps in self.terms:
            product = np.full(points.shape[1:], coeff, dtype=np.complex128)
            for x, a in zip(points, exps):
                if a:
                    product = product * x ** a
            total = total + product
        return total if total.shape else complex(total)

    def permuted(self, permutation):
        """Same function of the reordered variables: x_i -> x_permutation[i]."""
        terms = [(c, tuple(exps[p] for p in permutation)) for c, exps in self.terms]
        return TensorExpansion(self.order, tuple(terms))

    def split_terms(self, ordering=None):
        """
        Same function with every term c written as c/2 + (c - c/2), the terms
        optionally reordered by the index sequence `ordering`.
        """
        terms = []
        for coeff, exps in self.terms:
            half = coeff / 2
            terms.extend([(half, exps), (coeff - half, exps)])
        if ordering is not None:
            terms = [terms[i] for i in ordering]
        return TensorExpansion(self.order, tuple(terms))

    def coefficient_matrix(self):
        """
        For order 1, the matrix H with sum_ab H[a, b] x^a y^b equal to the expansion.
        """
        if self.order != 1:
            raise ParameterError("coefficient_matrix is defined for first-order expansions")
        size = self.max_exponent + 1
        H = np.zeros((size, size), dtype=np.complex128)
        for coeff, (a, b) in self.terms:
            H[a, b] += coeff
        return H


def compositions(total, parts):
    """All tuples of `parts` non-negative integers summing to `total`."""
    if total < 0:
        return
    # stars and bars: choose the positions of the parts - 1 bars
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        previous = -1
        result = []
        for bar in bars:
            result.append(bar - previous - 1)
            previous = bar
        result.append(total + parts - 1 - previous - 1)
        yield tuple(result)


def tensor_expansion(phi, k):
    """
    Elementary-tensor expansion of the k-th divided difference of a polynomial.

    k = 0 returns phi itself as a one-variable expansion.
    """
    if k < 0:
        raise ParameterError(f"Divided-difference order must be non-negative, got {k}")
    terms = []
    for m, c in enumerate(phi.trimmed_coefficients()):
        if c == 0 or m < k:
            continue
        for exps in compositions(m - k, k + 1):
            terms.append((complex(c), exps))
    return TensorExpansion(k, tuple(terms))


def projective_bound(expansion):
    """
    sum |coeff|; each monomial factor has sup-norm 1 on the circle, so this
    bounds the projective tensor norm of the represented function.
    """
    return float(sum(abs(c) for c, _ in expansion.terms))


def _recursive(phi, points):
    """
    (D^k phi)(x_1..x_{k+1}) =
        [(D^{k-1} phi)(x_1..x_k) - (D^{k-1} phi)(x_1..x_{k-1}, x_{k+1})] / (x_k - x_{k+1})
    """
    if len(points) == 1:
        return complex(phi(points[0]))
    head, last_two = points[:-2], points[-2:]
    left = _recursive(phi, head + [last_two[0]])
    right = _recursive(phi, head + [last_two[1]])
    return (left - right) / (last_two[0] - last_two[1])


def divided_difference(phi, k, points):
    """
    k-th divided difference of phi at k + 1 points.

    Separated points use the recursion; points closer than
    CONFLUENT_SEPARATION (coincident ones included) use the tensor
    expansion, which is the confluent limit.
    """
    points = [complex(x) for x in points]
    if len(points) != k + 1:
        raise InputError(f"Order {k} needs {k + 1} points, got {len(points)}")
    separated = all(abs(a - b) >= CONFLUENT_SEPARATION
                    for a, b in itertools.combinations(points, 2))
    if separated:
        return _recursive(phi, points)
    return tensor_expansion(phi, k).evaluate(points)


def expansion_term_count(m, k):
    """Number of terms of D^k(z^m): compositions of m - k into k + 1 parts."""
    return math.comb(m, k) if m >= k else 0
