"""
Exceptions raised by the lkp_stability library
"""


class StabilityError(Exception):
    """Base class for every error raised by this package"""


class ZeroPolynomial(StabilityError):
    """An operation that needs a nonzero polynomial received the zero polynomial"""


class InvalidParameter(StabilityError):
    """A parameter is outside the range an operation accepts"""


class IntegralityViolation(StabilityError):
    """A quantity that must be an integer came out fractional"""


class NonTerminating(StabilityError):
    """A hypergeometric series does not terminate within the requested cap"""


class ZeroPoint(StabilityError):
    """A sample point is zero where z + 1/z is needed"""


class SampleAtPole(StabilityError):
    """A sample point hits the pole z = 1/4 of the Jacobi argument map"""


class NegativeGamma(StabilityError):
    """A Taylor sequence presented as LP+ data has a negative entry"""


class RecordMismatch(StabilityError):
    """A persisted search record no longer reproduces its certificate"""
