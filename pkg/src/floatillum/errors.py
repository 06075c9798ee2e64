"""Exception types raised by the geometry routines."""


class GeometryError(Exception):
    """Base class for every error raised by floatillum."""


class NoBracket(GeometryError):
    """A ray search left the bounding ball without finding the expected crossing."""


class Degenerate(GeometryError):
    """Input is affinely dependent or a computed volume collapsed."""


class Unbounded(GeometryError):
    """A halfspace description admits a recession direction."""


class DimensionUnsupported(GeometryError):
    """The operation is only available in low dimensions."""


class NoExactPath(NotImplementedError):
    """A body offers no closed-form evaluation; callers fall back to sampling."""


class NotSupporting(GeometryError):
    """A point is not on the supporting hyperplane of the given normal."""


class TargetTooLarge(GeometryError):
    """A requested cap volume is not smaller than the admissible level."""


class SolverStall(GeometryError):
    """Sampling noise exceeds the requested solver tolerance."""

    def __init__(self, message, noise=None):
        super().__init__(message)
        self.noise = noise


class EmptyIntersection(GeometryError):
    """A halfspace system has empty interior."""


class IllConditioned(GeometryError):
    """A moment matrix is too anisotropic to normalize reliably."""


class SectionNoise(GeometryError):
    """Section estimates are too noisy to resolve the requested ratio."""


class WindowEmpty(GeometryError):
    """No admissible facet count exists for the requested level."""

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class ConfigError(GeometryError):
    """Invalid user configuration (unknown keys, missing files, bad values)."""
