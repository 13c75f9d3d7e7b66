"""Exception types raised across the package."""


class GeometryError(Exception):
    """Base class for all errors raised by hypcone."""


class DimensionMismatch(GeometryError, ValueError):
    pass


class DegeneracyError(GeometryError):
    """A frame, metric or Jacobian lost rank beyond the configured threshold."""


class PreconditionError(GeometryError, ValueError):
    pass


class DomainError(GeometryError, ValueError):
    """A finite-difference stencil or a parameter left the declared box."""


class EvaluationError(GeometryError, FloatingPointError):
    pass


class ModelViolation(GeometryError):
    """A point is too far from the hyperboloid to be treated as a point of H^n."""


class PoleError(GeometryError, ZeroDivisionError):
    """The Riccati flow hits a pole at the requested leaf time."""

    def __init__(self, message, t_pole=None):
        super().__init__(message)
        self.t_pole = t_pole
