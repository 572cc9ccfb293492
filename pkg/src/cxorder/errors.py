"""Exception types shared across the package."""


class CxOrderError(Exception):
    """Base class for every error raised by this library."""


class NegativeWeight(CxOrderError):
    """A measure weight or mixture coefficient is negative."""


class MassMismatch(CxOrderError):
    """Two measures that must carry equal total mass do not."""


class NotLattice(CxOrderError):
    """A measure is not supported on the non-negative integers."""


class BadParameter(CxOrderError):
    """A family or operator parameter is outside its admissible range."""


class LengthMismatch(CxOrderError):
    """Exponent tuples of different lengths were compared."""


class NotMajorized(CxOrderError):
    """The requested operation needs p majorized by q."""


class NonPositiveInput(CxOrderError):
    """A scalar input that must be strictly positive is not."""


class NotNonneg(CxOrderError):
    """A polynomial that must have non-negative coefficients does not."""


class ArityMismatch(CxOrderError):
    """Polynomial arities (or argument counts) disagree."""


class NotSStep(CxOrderError):
    """The pair of tuples is not an elementary one-unit transfer."""


class DecompositionMismatch(CxOrderError):
    """A squared-difference certificate does not expand to the target."""


class NonConvexTestFn(CxOrderError):
    """A test-function description fails its convexity certificate."""


class ModeArity(CxOrderError):
    """The number of points or degrees does not fit the requested mode."""


class Inconclusive(CxOrderError):
    """A truncated computation cannot certify the requested sign."""


class ParseError(CxOrderError):
    """Malformed textual input; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
