"""Exception types raised across the package.

Every error is a ``ValueError`` so callers that only care about "bad input"
can catch that, while tests and the CLI can discriminate on the subclass.
"""


class FGCError(ValueError):
    """Base class for all package errors."""


class NotAntisymmetric(FGCError):
    pass


class OddDimension(FGCError):
    pass


class NotHermitian(FGCError):
    pass


class NotSymmetric(FGCError):
    pass


class Indefinite(FGCError):
    pass


class ShapeMismatch(FGCError):
    pass


class NotOrthogonal(FGCError):
    pass


class NotSpecialOrthogonal(NotOrthogonal):
    pass


class BadPartition(FGCError):
    pass


class IndexOutOfRange(FGCError):
    pass


class InvalidCM(FGCError):
    pass


class NotPure(FGCError):
    pass


class InvalidChannel(FGCError):
    pass


class NotSquareChannel(FGCError):
    pass


class NotStandardForm(FGCError):
    pass


class SingularA(FGCError):
    """The channel matrix A has a kernel, so no Gaussian degrading map exists."""


class SingularD(FGCError):
    pass


class ChoiRankTooLarge(FGCError):
    """Antidegradability is only decided for square channels with Choi rank <= n."""


class OutOfRange(FGCError):
    pass


class TooManyModes(FGCError):
    pass


class NotDensityMatrix(FGCError):
    pass


class InvalidInput(InvalidCM):
    """A covariance matrix handed to a channel is not a valid state."""


class NotAntisymmetricB(NotAntisymmetric):
    """The B matrix of a channel is not antisymmetric."""
