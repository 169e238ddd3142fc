"""Exception types shared across the package."""

from __future__ import annotations


class IwasawaError(Exception):
    """Base class for all errors raised by this package."""


class PrecisionMismatch(IwasawaError):
    """Operands carry different primes or precisions."""


class NotAUnit(IwasawaError):
    pass


class EntryNotSmallEnough(IwasawaError):
    """A matrix entry is not divisible enough for the exponential to converge."""


class NotCongruentToIdentity(IwasawaError):
    pass


class PrecisionExhausted(IwasawaError):
    """The working precision cannot certify the requested statement."""


class MixedAlgebra(IwasawaError):
    pass


class RealizationNotInjective(IwasawaError):
    """A matrix could not be pulled back to Lie coordinates."""


class InvalidAlgebra(IwasawaError):
    """Structure constants violate a Lie algebra axiom.

    ``witness`` carries the offending data.
    """

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


class HypothesisFailed(IwasawaError):
    pass


class UnsupportedParameters(IwasawaError):
    pass


class ZeroElement(IwasawaError):
    pass


class WindowExceeded(IwasawaError):
    """A graded statement needs degrees beyond the quotient's safe window."""


class ZeroDivisor(IwasawaError):
    pass


class ZeroIdeal(IwasawaError):
    pass


class IndexOutOfRange(IwasawaError):
    pass


class DegreeBoundTooSmall(IwasawaError):
    pass


class InSubalgebra(IwasawaError):
    """The element already lies in the distinguished subalgebra."""


class PremiseFailed(IwasawaError):
    """A graded certificate required by a cleaning step does not hold."""

    def __init__(self, message: str, trace: object = None) -> None:
        super().__init__(message)
        self.trace = trace


class NotInClosure(IwasawaError):
    pass


class CoprimalityFailed(IwasawaError):
    pass


class SearchSpaceTooLarge(IwasawaError):
    pass


class InvalidParameter(IwasawaError):
    pass


class IoError(IwasawaError):
    """Report output could not be written."""
