"""Exception types shared across the library."""


class FeketeLabError(Exception):
    """Base class for all library errors."""


class InputError(FeketeLabError):
    """An argument is outside its documented range or has the wrong kind."""


class ShapeError(FeketeLabError):
    """Array / basis / point-set dimensions are incompatible."""


class CapacityError(FeketeLabError):
    """A combinatorial budget or size limit was exceeded."""


class DegenerateSetError(FeketeLabError):
    """The set is too thin (or empty) for the requested discretization."""


class DegenerateMeshError(FeketeLabError):
    """The mesh cannot support a unisolvent configuration at this degree."""


class DegenerateConfigurationError(FeketeLabError):
    """A point configuration is numerically singular for interpolation."""


class DescriptorInvalidError(FeketeLabError):
    """A cusp descriptor violated its defining inequality at a sampled point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoClosedFormError(FeketeLabError):
    """No closed-form equilibrium measure is known for this set."""


class FitError(FeketeLabError):
    """A least-squares fit had no usable samples."""
