"""Exception types shared across the package."""


class RevScatterError(Exception):
    """Base class for all numerical and input failures."""


class LengthMismatch(RevScatterError, ValueError):
    pass


class NonFiniteState(RevScatterError, FloatingPointError):
    pass


class ZeroOnContour(RevScatterError):
    """|f| dropped below the floor somewhere on a contour."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NoConvergence(RevScatterError):
    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class DerivativeVanished(RevScatterError):
    pass


class SuspectedMultipleZero(RevScatterError):
    pass


class RealZeroDetected(RevScatterError):
    pass


class UnresolvedCluster(RevScatterError):
    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class RadiusExceedsSearch(RevScatterError, ValueError):
    pass


class NonPositiveResult(RevScatterError):
    pass


class LargeImaginaryResidue(RevScatterError):
    pass


class IllConditioned(RevScatterError):
    pass


class InvalidInput(RevScatterError, ValueError):
    """Malformed user input (schema violations, bad parameters)."""
