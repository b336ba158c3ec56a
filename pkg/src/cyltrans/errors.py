"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class EmptyInput(GeometryError):
    pass


class ZeroDirection(GeometryError):
    pass


class ParallelAxes(GeometryError):
    pass


class InvalidParameter(GeometryError):
    pass


class NotPairwiseIntersecting(GeometryError):
    """Two members of a family do not meet; ``witness`` holds their indices."""

    def __init__(self, witness, message=None):
        self.witness = tuple(witness)
        super().__init__(message or f"cylinders {self.witness} do not intersect")


class NotCrossIntersecting(NotPairwiseIntersecting):
    """A member of F misses a member of G; witness is (index in F, index in G)."""

    def __init__(self, witness, message=None):
        witness = tuple(witness)
        super().__init__(witness, message or f"F[{witness[0]}] and G[{witness[1]}] do not intersect")


class NotWellRounded(GeometryError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"body {index} violates R < D*r")


class NotPairwiseIntersectable(GeometryError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"body {index} is too far from the reference body")


class PerturbationFailed(RuntimeError):
    pass


class GenerationFailed(RuntimeError):
    pass


class InsufficientResolution(RuntimeError):
    pass


class GuaranteeNotMet(RuntimeError):
    """The recounted hit total fell below the proven bound."""


class InvariantViolation(AssertionError):
    """An inline pipeline invariant failed; carries the offending quantity."""
