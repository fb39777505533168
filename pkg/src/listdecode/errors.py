"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ListDecodeError(Exception):
    """Base class for all library errors."""


class NotPrime(ListDecodeError):
    pass


class NotIrreducible(ListDecodeError):
    pass


class NotMonic(ListDecodeError):
    pass


class FieldMismatch(ListDecodeError):
    pass


class ZeroMap(ListDecodeError):
    pass


class NoSolution(ListDecodeError):
    pass


class DimMismatch(ListDecodeError):
    pass


class LengthMismatch(ListDecodeError):
    pass


class ShapeMismatch(ListDecodeError):
    pass


class NotDivisible(ListDecodeError):
    pass


class TooLarge(ListDecodeError):
    """A scan or enumeration would exceed its configured budget."""


class EnumerationTooLarge(TooLarge):
    pass


class BadDims(ListDecodeError):
    pass


class BadS(ListDecodeError):
    pass


class DegreeTooHigh(ListDecodeError):
    pass


class RadiusTooLarge(ListDecodeError):
    pass


class ThresholdTooLow(ListDecodeError):
    pass


class ZeroQ(ListDecodeError):
    pass


class Uncertified(ListDecodeError):
    pass


class VerificationFailed(ListDecodeError):
    pass


class MissingFieldSpec(ListDecodeError):
    pass


class FrontierOverflow(ListDecodeError):
    pass


class PoleAtInfinity(ListDecodeError):
    pass


class SingularSystem(ListDecodeError):
    pass


class InternalInvariant(ListDecodeError):
    """Raised when a mathematically guaranteed property fails to hold."""


class FormatError(ListDecodeError):
    """Malformed serialized input."""
