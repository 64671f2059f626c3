"""Exception types raised across the package."""


class MHCountError(ValueError):
    """Base class for all domain errors raised by mhcount."""


class EmptySelection(MHCountError):
    pass


class InsufficientPrimes(MHCountError):
    pass


class NotInvertible(MHCountError):
    pass


class ModulusTooLarge(MHCountError):
    pass


class NotAFactor(MHCountError):
    pass


class DegreeUnsupported(MHCountError):
    pass


class BadIndex(MHCountError):
    pass


class DegenerateInput(MHCountError):
    pass


class OrderConditionViolated(MHCountError):
    pass


class PrecisionUnavailable(MHCountError):
    pass


class BadRange(MHCountError):
    pass


class BudgetExceeded(MHCountError):
    pass


class ResidualTooLarge(MHCountError):
    pass
