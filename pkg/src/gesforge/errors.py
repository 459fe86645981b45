"""Exception types raised across the package."""


class GesforgeError(Exception):
    """Base class for all package errors."""


class ArgumentError(GesforgeError, ValueError):
    """An argument is malformed or inconsistent with its dimension profile."""


class ResourceError(GesforgeError, MemoryError):
    """A requested object would exceed the configured ambient-dimension cap."""


class PreconditionError(GesforgeError, ValueError):
    """A hypothesis required by a construction or criterion does not hold."""
