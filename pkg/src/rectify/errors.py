"""Exception hierarchy shared by every module."""


class RectifyError(Exception):
    """Base class for library errors."""


class DomainError(RectifyError, ValueError):
    """A parameter value lies outside the curve's domain."""


class DimensionMismatch(RectifyError, ValueError):
    pass


class NonConvergence(RectifyError):
    """A refinement schedule was exhausted before reaching tolerance.

    The flagged report is kept on ``self.report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroLength(RectifyError, ValueError):
    pass


class MissingDerivative(RectifyError, ValueError):
    pass


class HomogeneityError(RectifyError, ValueError):
    """Integrand is not positively homogeneous of degree one in t."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HypothesisViolated(RectifyError, ValueError):
    pass


class CertificationFailed(RectifyError):
    def __init__(self, message, report=None, violation=None):
        super().__init__(message)
        self.report = report
        self.violation = violation


class ZetaConditionViolated(RectifyError, ValueError):
    pass


class UnknownExample(RectifyError, KeyError):
    pass


class SpecError(RectifyError, ValueError):
    """A curve spec document failed validation."""
