"""Exception types raised by :mod:`nrange`."""


class NRangeError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(NRangeError, ValueError):
    """Input data does not follow the expected schema or shape."""


class NotAContraction(NRangeError, ValueError):
    """The operator norm exceeds one beyond tolerance."""


class UnequalDefects(NRangeError, ValueError):
    """The defect indices of ``T`` and ``T*`` differ."""


class NotUnitaryOmega(NRangeError, ValueError):
    pass


class AlreadyFull(NRangeError, ValueError):
    """``dim ker(A - lam)`` already reaches the kernel dimension of ``A``."""


class SingularSolve(NRangeError, ArithmeticError):
    """A linear system needed by an extension step is numerically degenerate."""


class TargetInSpectrum(NRangeError, ValueError):
    pass


class BadMultiplicities(NRangeError, ValueError):
    pass


class NoIntersection(NRangeError, ArithmeticError):
    """The span of the chosen eigenvectors misses the base space."""


class EmptyIntersection(NRangeError, ArithmeticError):
    pass


class TooCloseToSingularity(NRangeError, ValueError):
    pass


class UnwrapFailure(NRangeError, ArithmeticError):
    """Adaptive phase unwrapping hit its minimum step.

    This signals a singular point inside the declared arc, i.e. the arc
    data does not match the inner function.
    """


class NoNextSolution(NRangeError, ValueError):
    pass


class DegenerateChord(NRangeError, ArithmeticError):
    pass


class UndeclaredTailVerdict(NRangeError, ValueError):
    """A zero tail lacks the convergence verdicts needed for classification."""


class IllConditionedGram(NRangeError, ArithmeticError):
    pass


class RootOffCircle(NRangeError, ArithmeticError):
    pass
