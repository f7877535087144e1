class IpermError(ValueError):
    """Base class for all errors raised by iperm."""


class InvalidState(IpermError):
    """The array does not satisfy the validator of the required state."""


class KeyOutOfRange(InvalidState):
    """A key lies outside [1, n]."""


class NeedsBitTag(IpermError):
    """Sign-tagged inversion was asked to invert an array that already uses signs."""


class LengthOverflow(IpermError):
    """The array is too long to keep a spare sign bit in a 64-bit word."""
