"""Shared exception types.

Every error raised on purpose by this package derives from CongtopError,
so callers (in particular the CLI) can distinguish our refusals from bugs.
"""


class CongtopError(Exception):
    pass


class ZeroVectorError(CongtopError, ValueError):
    """A nonzero vector was required."""


class ShapeError(CongtopError, ValueError):
    """Matrix or vector dimensions do not match the operation."""


class NotABasisError(CongtopError, ValueError):
    """The given vectors are linearly dependent where a basis was required."""


class DomainError(CongtopError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class UnsupportedPrimeError(DomainError):
    """The operation's defining statement requires an odd prime."""


class TooLargeError(CongtopError):
    """A configured size cap would be exceeded.

    Carries the projected size so callers can report it.
    """

    def __init__(self, message, projected=None, cap=None):
        super().__init__(message)
        self.projected = projected
        self.cap = cap


class MalformedComplexError(CongtopError, ValueError):
    """A simplicial complex violates face closure or labeling invariants."""


class NotASimplexError(CongtopError, ValueError):
    """The given simplex does not belong to the complex."""


class NotAClosedSurfaceError(CongtopError):
    """A surface check failed; the message names the violated condition."""


class NotSpecialLinearError(CongtopError, ValueError):
    """Determinant is not 1 over F_p where SL membership was required."""


class NotUnimodularError(CongtopError, ValueError):
    """Determinant is not +-1 over F_p where a unimodular basis was required."""


class AssertionFailure(CongtopError):
    """A mathematically guaranteed relation failed to hold.

    Raised by verification-style operations; indicates an implementation bug,
    never a property of valid inputs.
    """
