"""Exception types raised across the package."""


class SumprodError(Exception):
    """Base class for all package errors."""


class NonPrime(SumprodError, ValueError):
    pass


class DegreeOutOfRange(SumprodError, ValueError):
    pass


class FieldTooLarge(SumprodError, ValueError):
    pass


class ReducibleModulus(SumprodError, ValueError):
    pass


class DivisionByZero(SumprodError, ZeroDivisionError):
    pass


class LengthMismatch(SumprodError, ValueError):
    pass


class EmptyInput(SumprodError, ValueError):
    pass


class ZeroSlopePresent(SumprodError, ValueError):
    pass


class NonProductFamily(SumprodError, ValueError):
    pass


class NegativeValue(SumprodError, ValueError):
    pass


class EmptyDomain(SumprodError, ValueError):
    pass


class ZeroSize(SumprodError, ValueError):
    pass


class SizeTooLarge(SumprodError, ValueError):
    pass


class BadDescriptor(SumprodError, ValueError):
    pass


class IoFailure(SumprodError, OSError):
    pass
