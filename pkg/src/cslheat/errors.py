"""Exception hierarchy shared by the package."""


class CSLHeatError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(CSLHeatError, ValueError):
    pass


class OutOfRangeError(CSLHeatError, ValueError):
    """Requested frequency lies above the supremum of a dispersion."""


class FormatError(CSLHeatError, ValueError):
    pass


class DomainError(CSLHeatError, ValueError):
    pass


class ValidationError(CSLHeatError, ValueError):
    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class UndefinedRatioError(CSLHeatError, ZeroDivisionError):
    pass


class ConvergenceError(CSLHeatError, RuntimeError):
    """Adaptive quadrature stopped before reaching the requested tolerance.

    ``result`` holds the best estimate available when the subdivision
    budget ran out.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InternalConsistencyError(CSLHeatError, RuntimeError):
    pass


class CheckFailure(CSLHeatError, AssertionError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
