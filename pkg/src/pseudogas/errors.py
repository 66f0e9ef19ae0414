"""Exception hierarchy shared by all modules."""


class PseudogasError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PseudogasError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonPositiveInput(DomainError):
    """A quantity that must be strictly positive was not."""


class SpinStatisticsMismatch(DomainError):
    """Spin parity is incompatible with the requested statistics."""


class OutOfSemiclassicalRange(DomainError):
    """The requested state is outside the semi-classical regime."""


class NoConvergence(PseudogasError, ArithmeticError):
    """An iterative method failed to reach its tolerance."""


class QuadratureFailure(NoConvergence):
    """Adaptive quadrature did not reach the requested tolerance."""


class LatticeTooLarge(PseudogasError):
    """Mode lattice exceeds the size guard."""


class EnumerationTooLarge(PseudogasError):
    """Brute-force enumeration exceeds the configuration budget."""
