"""Shared exception types."""


class QuadspecError(Exception):
    """Base class for all package-specific errors."""


class MixedFields(QuadspecError):
    """Arithmetic attempted between elements of incompatible quadratic fields."""


class TowerTooDeep(QuadspecError):
    """A computation needs a second quadratic extension on top of Q(sqrt(D))."""


class DegenerateMap(QuadspecError):
    """The three quadratic components share a common projective zero."""


class NoInvariantLine(QuadspecError):
    """The map does not preserve the requested line."""


class NonSimpleLineFixedPoint(QuadspecError):
    """The restriction to the invariant line has a multiple fixed point."""


class NonGenericTarget(QuadspecError):
    """A target spectrum falls outside the generic locus an algorithm assumes."""


class NonGenericTau(NonGenericTarget):
    """The prescribed (t_i, d_i) data does not cut out a finite fiber."""


class DegenerateTau(NonGenericTarget):
    """The quadratic normalization equation degenerates at the given data."""


class InfinitelyManyLines(QuadspecError):
    """The invariant-line condition holds on a positive-dimensional family."""


class CollinearMarkedPoints(QuadspecError):
    """The three marked fixed points lie on a common line."""


class PointOnLine(QuadspecError):
    """A marked off-line fixed point actually lies on the invariant line."""


class DegenerateFixedPoint(QuadspecError):
    """A fixed point has det(I - Df) = 0 (or an on-line tangent eigenvalue 0)."""


class DiscriminantZero(QuadspecError):
    """The symmetric-function discriminant vanishes; the inversion formulas fail."""


class MissingBound(QuadspecError):
    """An enumeration over an infinite family was requested without a bound."""


class PreconditionError(QuadspecError):
    """Structured input fails a documented precondition."""


class ResourceBudgetExceeded(QuadspecError):
    """A Groebner computation ran past its configured budget."""

    def __init__(self, message: str, *, reductions: int = 0, degree: int = 0):
        super().__init__(message)
        self.reductions = reductions
        self.degree = degree
