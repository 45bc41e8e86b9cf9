"""Exception types raised across the package."""


class WmixgofError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WmixgofError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(WmixgofError):
    """Quantile inversion failed to converge within its iteration budget."""


class TooFewObservations(WmixgofError):
    """Sample too small for a five-parameter maximum-likelihood fit."""


class AllStartsFailed(WmixgofError):
    """Every optimization start diverged or ended on the mixing boundary."""


class NonFiniteHessian(WmixgofError):
    """A Hessian entry failed to evaluate to a finite number."""


class DegenerateInput(WmixgofError, ValueError):
    """Input contains values at which a statistic is undefined."""


class SingularInformation(WmixgofError):
    """The estimated information matrix is not positive definite."""


class EigenSolverFailure(WmixgofError):
    """Eigendecomposition of the kernel matrix failed."""


class QuadratureFailure(WmixgofError):
    """Numerical integration could not meet the requested tolerance."""


class StudyAborted(WmixgofError):
    """Too many replications failed for the study result to be trusted."""
