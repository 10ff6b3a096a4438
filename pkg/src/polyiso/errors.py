"""Exception hierarchy for polyiso.

Errors that describe malformed input derive from ``ValueError`` as well, so
callers that only care about "bad data" can catch that.
"""


class PolyisoError(Exception):
    """Base class for every error raised by this package."""


class DataError(PolyisoError, ValueError):
    """Input data violates a documented invariant."""


class InvalidMatrix(DataError):
    pass


class InvalidGauge(DataError):
    pass


class InvalidShape(DataError):
    pass


class InvalidGrid(DataError):
    pass


class InvalidSpec(DataError):
    pass


class ArityMismatch(DataError):
    """Vector length or matrix size does not match the gauge arity."""


class DimensionMismatch(DataError):
    pass


class DecompositionFailure(PolyisoError):
    """A LAPACK decomposition did not converge."""


class ClusterAmbiguity(PolyisoError):
    """Single-linkage clustering produced groups that are not well separated."""


class IllConditionedSeparation(PolyisoError):
    pass


class IllConditionedSpectrum(PolyisoError):
    """Interpolation nodes are too close for a trustworthy Lagrange basis."""


class ToleranceAmbiguity(PolyisoError):
    """A rank decision changes within a factor 10 of the requested tolerance."""

    def __init__(self, msg, residual=None, tol=None):
        super().__init__(msg)
        self.residual = residual
        self.tol = tol


class NonFiniteResult(PolyisoError):
    pass


class NotNormalReference(PolyisoError):
    pass


class NotInvertible(PolyisoError):
    pass


class PreconditionFailure(PolyisoError):
    """A hypothesis of a checked statement does not hold.

    ``lhs`` and ``rhs`` carry the two sides of the violated (in)equality.
    """

    def __init__(self, msg, lhs=None, rhs=None):
        super().__init__(msg)
        self.lhs = lhs
        self.rhs = rhs


class HullViolation(PolyisoError):
    pass
