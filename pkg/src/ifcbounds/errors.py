"""Exception types raised by the bound calculators."""


class IFCError(ValueError):
    """Base class for all errors raised by ifcbounds."""


class ZeroDirectGain(IFCError):
    pass


class InvalidFamilyParams(IFCError):
    pass


class DegeneratePower(IFCError):
    pass


class SingularCovariance(IFCError):
    """Conditional output covariance is not positive definite."""


class BoundaryCorrelation(IFCError):
    """A numeric evaluation was requested at |rho| >= 1."""


class InapplicableCandidate(IFCError):
    pass


class EmptyBoundary(IFCError):
    """The case-3 boundary circle does not meet the open unit disk."""
