"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`BetaTilingError`,
so callers (the CLI in particular) can separate input problems from bugs.
"""


class BetaTilingError(Exception):
    """Base class."""


class PolynomialError(BetaTilingError):
    pass


class NotMonic(PolynomialError):
    pass


class NotIrreducible(PolynomialError):
    pass


class DegreeTooLarge(PolynomialError):
    pass


class NotPisot(PolynomialError):
    """Raised with a ``witness`` dict describing the offending conjugates."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


class OutOfRange(BetaTilingError):
    pass


class IterationBudgetExceeded(BetaTilingError):
    pass


class InvalidInterval(BetaTilingError):
    pass


class NotInZInvBeta(BetaTilingError):
    pass


class IntegerBeta(BetaTilingError):
    pass


class PerronMismatch(BetaTilingError):
    pass


class NotCoprime(BetaTilingError):
    pass


class NotFundamental(BetaTilingError):
    pass


class Inadmissible(BetaTilingError):
    pass


class PrecisionExceeded(BetaTilingError):
    pass
