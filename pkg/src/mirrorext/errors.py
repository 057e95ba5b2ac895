"""Exception hierarchy shared by all modules."""


class MirrorExtError(Exception):
    """Base class for every error raised by this package."""


class UnknownLabel(MirrorExtError, LookupError):
    pass


class DualityError(MirrorExtError, ValueError):
    pass


class ConvergenceError(MirrorExtError, ArithmeticError):
    pass


class ShapeError(MirrorExtError, ValueError):
    pass


class IntegralityError(MirrorExtError, ArithmeticError):
    """Verlinde numbers that are not integers; the input is not genuine modular data."""

    def __init__(self, message, worst=None, residual=None):
        super().__init__(message)
        self.worst = worst
        self.residual = residual


class NonPseudoUnitaryError(MirrorExtError, ValueError):
    pass


class InvalidLevel(MirrorExtError, ValueError):
    pass


class InvalidRank(MirrorExtError, ValueError):
    pass


class InvalidInput(MirrorExtError, ValueError):
    pass


class BudgetExceeded(MirrorExtError, RuntimeError):
    pass


class PreconditionError(MirrorExtError, ValueError):
    pass


class ParseError(MirrorExtError, ValueError):
    pass


class SchemaError(MirrorExtError, ValueError):
    pass


class ResolutionError(MirrorExtError, LookupError):
    pass
