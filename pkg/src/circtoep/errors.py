"""Exception types shared across the package.

Every class carries a short machine-readable ``code`` which the command line
front end copies into its JSON error payload.
"""


class ToeplitzError(Exception):
    code = "error"


class DomainError(ToeplitzError, ValueError):
    """An argument lies outside the domain where the operation is defined."""

    code = "domain"


class DimensionMismatchError(ToeplitzError, ValueError):
    code = "dimension_mismatch"


class SingularMatrixError(ToeplitzError, ArithmeticError):
    """A matrix (or a set of oracle eigenvalues) is singular or indefinite."""

    code = "singular"


class CapExceededError(ToeplitzError, ValueError):
    code = "cap_exceeded"


class RotationConstantError(ToeplitzError, ValueError):
    """The rotation constant m exceeds the smallest oracle value."""

    code = "m_too_large"


class ConvergenceError(ToeplitzError, RuntimeError):
    """An iterative method hit its iteration cap.

    ``bracket`` holds the best available ``(lambda_min, lambda_max)`` estimate.
    """

    code = "no_convergence"

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
