"""Exception types raised by tubehost."""


class TubeHostError(Exception):
    """Base class for all package errors."""


class InvalidInputError(TubeHostError, ValueError):
    pass


class DimensionMismatchError(InvalidInputError):
    pass


class EmptySetError(InvalidInputError):
    """A halfspace system has no solution."""


class UnsupportedDimensionError(TubeHostError):
    """A representation conversion was requested above the supported dimension."""


class DegenerateConeError(TubeHostError):
    """The cone B(C) has empty interior, so the tube semigroup is empty."""


class OutsideSemigroupError(InvalidInputError):
    pass


class DomainError(InvalidInputError):
    """A functional outside C was passed where a character of the algebra is required."""


class ContextMismatchError(InvalidInputError):
    pass


class UnboundedBelowError(TubeHostError):
    """A linear functional is unbounded below on a set.

    The offending recession direction is kept on ``ray``; it certifies
    unboundedness since ``<ray, x> < 0``.
    """

    def __init__(self, ray, value):
        self.ray = ray
        self.value = value
        super().__init__(f"unbounded below along ray {list(ray)} (slope {value:.3g})")
