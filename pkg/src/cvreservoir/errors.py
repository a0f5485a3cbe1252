"""Exception hierarchy shared by all modules."""


class ReservoirError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ReservoirError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class BranchError(DomainError):
    """Argument lies on a branch cut of a multivalued function."""


class EvaluationError(ReservoirError, ArithmeticError):
    """A special-function evaluation failed or produced non-finite output."""


class ImaginaryResidueError(EvaluationError):
    """A quantity that must be real carries a non-negligible imaginary part."""


class ConvergenceError(ReservoirError, ArithmeticError):
    """An iterative or adaptive routine missed its error target."""


class GridError(ReservoirError, ValueError):
    """The time grid is too coarse or the request lies outside it."""


class ResolutionError(GridError):
    """The grid undersamples an oscillation that must be resolved."""


class ShapeError(ReservoirError, ValueError):
    """A covariance matrix is not in the expected structured family."""


class AsymmetryError(ShapeError):
    """The two local blocks of a covariance matrix differ."""


class NumericalError(ReservoirError, ArithmeticError):
    """A discriminant or invariant fell outside its admissible range."""


class ThresholdError(ReservoirError, ValueError):
    """An event threshold is incompatible with the trajectory."""


class UsageError(ReservoirError, ValueError):
    """Invalid run configuration; carries one message per offending field."""

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))
