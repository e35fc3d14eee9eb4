"""Exception types raised across the package."""


class JointSpectrumError(Exception):
    """Base class for all errors raised by :mod:`jointspec`."""


class SingularMatrix(JointSpectrumError, ArithmeticError):
    """Elimination met a pivot below the invertibility threshold."""


class NoConvergence(JointSpectrumError):
    """Quadrature exhausted its panel doublings before meeting ``abs_tol``.

    The last estimate is kept on ``result`` so callers can still use it.
    """

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


class NoConvergenceWarning(RuntimeWarning):
    pass


class SampleTooCoarse(JointSpectrumError):
    """Consecutive samples jump by pi/2 or more in argument."""


class PathHitsZero(JointSpectrumError):
    """A sampled value is too close to zero to carry an argument."""

    def __init__(self, msg, index=None, value=None):
        super().__init__(msg)
        self.index = index
        self.value = value


class ArityMismatch(JointSpectrumError, ValueError):
    pass


class DomainError(JointSpectrumError, ValueError):
    pass


class UnknownAutomaton(JointSpectrumError, KeyError):
    pass


class LevelTooLarge(JointSpectrumError, ValueError):
    pass


class DegenerateSlice(JointSpectrumError, ZeroDivisionError):
    pass


class RenormalizationPole(JointSpectrumError, ZeroDivisionError):
    pass


class PointInSpectrum(JointSpectrumError, ValueError):
    pass


class PoleAtNode(JointSpectrumError, ZeroDivisionError):
    pass


class PoleAtMuSquaredFour(JointSpectrumError, ZeroDivisionError):
    pass


class LambdaZero(JointSpectrumError, ZeroDivisionError):
    pass


class WindingInconsistent(JointSpectrumError):
    """Winding numbers computed for different ``x`` disagree."""
