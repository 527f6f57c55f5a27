"""Exception hierarchy shared by every module."""


class SimplexLearnError(Exception):
    """Base class for all package errors."""


class DimensionError(SimplexLearnError, ValueError):
    """Array shapes or requested dimensions are inconsistent."""


class NullspaceNotUniqueError(SimplexLearnError):
    """A matrix expected to have a one-dimensional null space does not."""


class DegenerateSimplexError(SimplexLearnError):
    """The simplex has (numerically) zero volume."""


class DegenerateDataError(SimplexLearnError):
    """The dataset spans no volume (e.g. all points coincide)."""


class InsufficientDataError(SimplexLearnError, ValueError):
    """Fewer points than the operation needs."""


class UnsupportedOperationError(SimplexLearnError, NotImplementedError):
    """The requested operation is undefined for this configuration."""
