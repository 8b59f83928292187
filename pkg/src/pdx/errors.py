"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Geometric input does not span the plane (collinear, too few points)."""


class DuplicatePointError(ValueError):
    """Two input points coincide exactly; Poisson samples never do, so this
    signals a caller bug rather than data to be merged."""


class UnboundedFlowerError(ValueError):
    """Requested the Voronoi flower of a convex-hull vertex."""


class ModelBuildError(ValueError):
    """A typical-degree model could not be assembled from the given source."""


class SchemaError(ValueError):
    """A result file does not match the expected schema version or layout."""
