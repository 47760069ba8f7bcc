"""Exception hierarchy shared by every ncx module."""


class NcxError(Exception):
    """Base class for all errors raised by ncx."""


class DomainError(NcxError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalFailure(NcxError, ArithmeticError):
    """A dense decomposition failed to converge."""


class ResolutionError(DomainError):
    """A Walsh/Rademacher index is not resolved by the dyadic grid."""


class AliasError(DomainError):
    """A frequency is not representable without aliasing on the grid."""


class LacunarityError(DomainError):
    """A set of frequencies violates k_{j+1} > 2 k_j or k_0 >= 1."""


class HypothesisError(NcxError):
    """A function fails the coefficient-vanishing hypothesis of a construction.

    ``offending`` lists the indices whose coefficients are not zero.
    """

    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = list(offending)


class TruncationError(DomainError):
    """The floor of a truncated half-line span is too shallow."""
