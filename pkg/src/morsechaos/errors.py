"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested materialization exceeds the configured cap."""


class HorizonExceeded(IndexError):
    """A point was queried past the last block it can evaluate."""


class ParityError(ValueError):
    """Gap sequence violates a_n = n (mod 2) where the construction needs it."""


class DescriptorError(ValueError):
    """Malformed or unknown point descriptor."""


class DiagonalError(ValueError):
    """A tuple contains the same point twice."""
