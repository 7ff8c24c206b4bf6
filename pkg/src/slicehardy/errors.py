"""Exception types shared across the package."""


class SliceHardyError(Exception):
    """Base class for all package errors."""


class ResolutionError(SliceHardyError, ValueError):
    """A requested scale or radius is too small for the grid spacing."""


class NumericFailure(SliceHardyError, RuntimeError):
    """A root-finding or bracketing procedure failed to converge."""


class PreconditionError(SliceHardyError, ValueError):
    """A documented hypothesis of an operation is violated."""


class InvalidDataError(SliceHardyError, ValueError):
    """Input samples are non-finite or grids are incompatible."""


class ConstructionError(SliceHardyError, RuntimeError):
    """A kernel or covering object could not be built as specified."""


class UnderdeterminedError(SliceHardyError, ValueError):
    """A moment system has too few cells to determine the polynomial."""


class NoBoundaryError(SliceHardyError, ValueError):
    """An open set fills the whole sampled box, so no covering exists."""


class DecompositionRangeError(SliceHardyError, RuntimeError):
    """The level range was exhausted before the remainder was coarse."""


class ConfigError(SliceHardyError, ValueError):
    """A scenario configuration is malformed or violates a hypothesis."""
