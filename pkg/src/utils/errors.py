"""
Error types raised across the package.

Every class also derives from a builtin exception so callers can catch
ValueError / ArithmeticError as usual.
"""


class ConcalcError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ConcalcError, ValueError):
    """Malformed input: non-finite entries, wrong shapes, bad JSON."""


class ContractViolation(ConcalcError, ValueError):
    """A mathematical precondition (contraction, unitary, Hermitian) fails."""


class NotPositiveSemidefiniteError(ContractViolation):
    """A matrix expected to be PSD has an eigenvalue below -tol."""


class PreconditionViolation(ContractViolation):
    """A caller-side precondition failed its numerical check."""


class ParameterError(ConcalcError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class EvaluationError(ConcalcError, ArithmeticError):
    """A function or kernel could not be evaluated at the requested points."""
