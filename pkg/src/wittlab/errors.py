"""Shared exception types.

Every domain error raised by the library derives from WittlabError so the
CLI can map them to exit code 1 uniformly.
"""


class WittlabError(Exception):
    """Base class for all domain errors."""

    code = "domain-error"


class RingMismatch(WittlabError):
    code = "ring-mismatch"


class NotAUnit(WittlabError):
    code = "not-a-unit"


class NotAOneUnit(WittlabError):
    code = "not-a-one-unit"


class NotAUnitFactor(WittlabError):
    code = "not-a-unit-factor"


class CharZero(WittlabError):
    code = "char-zero"


class CharPUnsupported(WittlabError):
    code = "char-p-unsupported"


class NonInvertibleInteger(WittlabError):
    code = "non-invertible-integer"


class DegreeBoundExceeded(WittlabError):
    code = "degree-bound-exceeded"


class UnsupportedField(WittlabError):
    code = "unsupported-field"


class InseparableExtension(WittlabError):
    code = "inseparable-extension"


class NotAPthPowerError(WittlabError):
    code = "not-a-pth-power"


class NotDivisorClosed(WittlabError):
    code = "not-divisor-closed"


class NotRelative(WittlabError):
    code = "not-relative"


class Undecided(WittlabError):
    code = "undecided"


class NoVanishingSlot(WittlabError):
    code = "no-vanishing-slot"


class IncompatibleBase(WittlabError):
    code = "incompatible-base"


class PaddingSearchFailed(WittlabError):
    code = "padding-search-failed"


class CapExceeded(WittlabError):
    code = "cap-exceeded"


class NotPrime(WittlabError):
    code = "not-prime"


class NotIntegrable(WittlabError):
    code = "not-integrable"


class BadDecomposition(WittlabError):
    code = "bad-decomposition"


class UnknownRing(WittlabError):
    code = "unknown-ring"


class ExprSyntaxError(WittlabError):
    """Parse failure with position information."""

    code = "syntax-error"

    def __init__(self, message: str, line: int = 1, col: int = 0):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col
