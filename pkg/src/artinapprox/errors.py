"""Exception hierarchy shared by every module of the package."""


class ArtinError(ValueError):
    """Base class for all package errors (malformed or out-of-domain input)."""


class NotAUnit(ArtinError):
    pass


class ArityMismatch(ArtinError):
    pass


class PrecisionExhausted(ArtinError):
    """A series vanishes at its working precision, so its order is unknown."""


class NotZRegular(ArtinError):
    pass


class PreconditionViolated(ArtinError):
    pass


class IncompatibleOrders(ArtinError):
    def __init__(self, k, lhs=None, rhs=None):
        self.k = k
        msg = f"binomial {k}: weights differ"
        if lhs is not None:
            msg += f" ({lhs} != {rhs})"
        super().__init__(msg)


class PrecisionTooLow(ArtinError):
    pass


class NotCoprime(ArtinError):
    pass


class BudgetExceeded(ArtinError):
    pass
