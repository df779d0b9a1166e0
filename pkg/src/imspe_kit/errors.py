"""Exception hierarchy shared across the package."""


class ImspeKitError(Exception):
    """Base class for all errors raised by imspe_kit."""


class ValidationError(ImspeKitError, ValueError):
    """Invalid argument: wrong dimension, out-of-domain coordinate, bad hyperparameter."""


class NearSingularError(ImspeKitError):
    """The bordered correlation matrix is (numerically) singular.

    Carries the indices of the offending point pair when coincident points
    are the cause.
    """

    def __init__(self, message, pair=None, cond_estimate=None):
        super().__init__(message)
        self.pair = pair
        self.cond_estimate = cond_estimate


class SolveError(ImspeKitError):
    """Linear solve failed or is too ill-conditioned to trust.

    ``cond_estimate`` is the 2-norm condition estimate of the bordered matrix.
    """

    def __init__(self, message, cond_estimate=None):
        super().__init__(message)
        self.cond_estimate = cond_estimate


class QuadratureError(ImspeKitError):
    """Adaptive quadrature failed to reach the requested tolerance."""
