"""Exception hierarchy.

Every error raised by the library derives from :class:`CondExtremesError`.
Subclasses of :class:`DomainError` signal invalid parameters or inputs; the
CLI maps them to exit status 1.  :class:`NumericalError` subclasses signal
non-convergence (exit status 3).
"""


class CondExtremesError(Exception):
    """Base class for all library errors."""


class DomainError(CondExtremesError, ValueError):
    """Invalid parameters or arguments."""


class NumericalError(CondExtremesError, ArithmeticError):
    """A numerical routine failed to converge or met a non-finite value."""


# numerics
class NonFinite(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class NoSignChange(DomainError):
    pass


class EmptyDomain(DomainError):
    pass


class NonPositive(DomainError):
    pass


# laplace_engine
class NonNegativeCurvature(DomainError):
    pass


class NoNegativeDerivative(DomainError):
    pass


class SmoothnessViolation(DomainError):
    pass


# margins
class InvalidLevel(DomainError):
    pass


class DegenerateJoint(DomainError):
    pass


# hw_model
class NonPositiveX(DomainError):
    pass


class ThresholdTooLow(DomainError):
    pass


class OutsideRestrictedSpace(DomainError):
    pass


# ht_model
class DeltaTooSmall(DomainError):
    def __init__(self, delta, bound):
        self.delta = delta
        self.bound = bound
        super().__init__(f"delta={delta!r} is below 1/(1-beta)={bound!r}")


class BelowThreshold(DomainError):
    pass


class Unclassifiable(DomainError):
    pass


class EtaUndefined(DomainError):
    pass


# empirical
class NoExceedances(DomainError):
    pass


class NoJointExceedances(DomainError):
    pass
