"""Domain errors shared across the package."""


class DomainError(Exception):
    """Base class for all errors raised by library operations."""


class NotInSpan(DomainError):
    """Point is not in the linear span of the given generators."""


class DependentGenerators(DomainError):
    """Generators expected to be linearly independent are not."""


class PointOutsideSupport(DomainError):
    """Point does not lie in the support of the fan."""


class DegenerateHeights(DomainError):
    """Height vector induces a non-simplicial lower facet."""


class NotFullDimensional(DomainError):
    """A maximal cone does not have full dimension."""


class UnboundedDegree(DomainError):
    """No degree functional with finite graded pieces is available."""


class NoStabilization(DomainError):
    """Halving search for the stabilization parameter hit the iteration cap."""


class DimensionOvershoot(DomainError):
    """Cumulative quotient dimension exceeded the normalized volume."""


class NoStabilizationWindow(DomainError):
    """Quotient did not reach a stable window within the offset cap."""


class NoParticularSolution(DomainError):
    """Integer system has no solution; internal error when rays generate N."""


class ZeroCoordinate(DomainError):
    """Evaluation point has a zero coordinate."""


class InvalidFan(DomainError):
    """Fan data fails validation."""
