"""Exception hierarchy.

The CLI maps each family onto an exit code: input problems (2), mathematical
precondition failures (3) and failed internal postconditions (4).
"""


class GNAError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(GNAError):
    exit_code = 2


class ConfigurationError(InputError, ValueError):
    pass


class ParseError(InputError):
    """Syntax error in a net expression."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class EvaluationError(InputError):
    """Evaluation of an expression failed at some grid index."""

    def __init__(self, message, k=None):
        self.k = k
        if k is not None:
            message = f"{message} at grid index k={k}"
        super().__init__(message)


class MathError(GNAError):
    """A mathematical precondition of an operation does not hold."""

    exit_code = 3


class StructuralError(MathError, ValueError):
    """Grid mismatch, shape mismatch or malformed partition."""


class DomainError(MathError, ValueError):
    pass


class NonInvertibleScalarError(MathError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class SingularMatrixError(MathError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class PreconditionError(MathError):
    def __init__(self, message, details=None):
        self.details = details
        super().__init__(message)


class SymmetryError(PreconditionError):
    pass


class InvalidFormError(PreconditionError):
    pass


class UnsupportedError(MathError):
    pass


class PostconditionError(GNAError):
    """A checked result failed its own verification."""

    exit_code = 4

    def __init__(self, message, details=None):
        self.details = details
        super().__init__(message)


class SplitFailureError(PostconditionError):
    pass
