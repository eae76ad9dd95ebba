"""Exception hierarchy for the duality package.

Every domain error derives from :class:`DualityError` so callers (CLI,
service) can map the whole family onto a single exit code / HTTP status.
"""


class DualityError(ValueError):
    """Base class for all domain validation errors."""


class NotHermitian(DualityError):
    pass


class TraceNotOne(DualityError):
    pass


class NotPositive(DualityError):
    pass


class BadProbabilities(DualityError):
    pass


class WrongDimension(DualityError):
    pass


class DimensionMismatch(DualityError):
    pass


class NotFourier(DualityError):
    pass


class BadLength(DualityError):
    pass


class GainOrderViolated(DualityError):
    pass


class GainSumNonzero(DualityError):
    pass


class BadMeasure(DualityError):
    pass


class TooLarge(DualityError):
    pass


class BadParameter(DualityError):
    pass


class BadN(DualityError):
    pass


class EmptyRuns(DualityError):
    pass
