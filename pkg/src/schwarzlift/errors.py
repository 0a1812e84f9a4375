"""Exception hierarchy shared by all modules."""


class SchwarzliftError(Exception):
    """Base class for library errors."""


class NumericalError(SchwarzliftError, ArithmeticError):
    """A quantity could not be evaluated at the requested point(s)."""

    def __init__(self, message, z=None):
        if z is not None:
            message = f"{message} (at z = {complex(z):.12g})"
        super().__init__(message)
        self.z = z


class DivisionByZeroLeadCoefficient(NumericalError):
    pass


class BranchPointAtCenter(NumericalError):
    pass


class CriticalPoint(NumericalError):
    pass


class DegenerateDilatation(NumericalError):
    pass


class DegenerateShear(NumericalError):
    pass


class ZeroDilatation(NumericalError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class NotASquare(NumericalError):
    pass


class EvaluationError(NumericalError):
    pass


class OrderTooLow(SchwarzliftError, ValueError):
    pass


class DomainError(SchwarzliftError, ValueError):
    pass


class PointOutsideDomain(DomainError):
    pass


class IoError(SchwarzliftError, OSError):
    """A mesh or report could not be written."""


class PreconditionViolation(SchwarzliftError, ValueError):
    pass


class ExprSyntaxError(SchwarzliftError, SyntaxError):
    """Malformed expression text; ``offset`` is the 0-based byte offset."""

    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.msg = message
        self.offset = offset
        self.text = text


class NonConstantExponent(ExprSyntaxError):
    pass


class TruncationWarning(UserWarning):
    pass
