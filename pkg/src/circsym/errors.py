"""Exception types shared across the toolkit.

The CLI maps these onto its exit-code contract: input and sampling
problems are exit 1, scope/geometry violations exit 2, numerical
failures exit 3.
"""


class CircSymError(Exception):
    """Base class for all toolkit errors."""


class InputError(CircSymError):
    """Malformed input file, JSON schema violation, or bad flag value."""


class DomainViolationError(CircSymError):
    """Evaluation requested outside the trusted radius of a series."""


class InsufficientSamplingError(CircSymError):
    """Too few samples, vertices, or slices for the requested resolution."""


class InapplicableError(CircSymError):
    """A check's precondition rules out the given input (e.g. c0 = 0)."""


class GeometryError(CircSymError):
    """Self-intersecting, misoriented, or otherwise degenerate geometry."""


class ScopeError(CircSymError):
    """Domain shape outside the supported class (origin inside, slit
    boundary, normalization target not interior)."""


class BoundaryAmbiguityError(CircSymError):
    """Query point too close to the boundary curve to classify."""


class BranchError(CircSymError):
    """Branch tracking failed during map composition."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class DegenerateContactWarning(UserWarning):
    """Tangential (even-order) contact between a slicing circle and the
    boundary; arc boundaries were resolved by membership probes."""
