"""Exception types shared across the package."""


class FFWeilError(Exception):
    """Base class for all errors raised by ffweil."""


class ValidationError(FFWeilError, ValueError):
    """Input is well formed but mathematically invalid."""


class ParseError(FFWeilError, ValueError):
    """Input could not be parsed."""


class NotKummerCompatible(ValidationError):
    pass


class NotGeometricallyConnected(ValidationError):
    pass


class SingularMatrix(FFWeilError, ArithmeticError):
    pass


class NoSolution(FFWeilError, ArithmeticError):
    pass


class ReconstructionUnstable(FFWeilError):
    pass


class WildRamification(ValidationError):
    pass


class OddConductor(FFWeilError):
    pass


class FunctionalEquationViolated(FFWeilError):
    pass


class OrderMismatch(FFWeilError):
    pass


class UnsupportedFamily(FFWeilError):
    pass


class FormatUnsupported(FFWeilError):
    pass


class VerificationFailed(FFWeilError):
    """Raised when two sides of an identity disagree.

    ``lhs`` and ``rhs`` hold the mismatched values and ``report`` the
    full report that was being assembled.
    """

    def __init__(self, message, lhs=None, rhs=None, report=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
        self.report = report
