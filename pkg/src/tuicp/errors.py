"""Exception hierarchy shared by every module."""


class TuicpError(Exception):
    """Base class for errors raised by this package."""


class InputError(TuicpError, ValueError):
    """Malformed arguments: wrong lengths, out-of-range ids, bad slices."""


class ValidationError(TuicpError, ValueError):
    """An instance or coloring violates its structural invariants."""

    def __init__(self, message, problems=()):
        super().__init__(message)
        self.problems = list(problems)


class PreconditionError(TuicpError, ValueError):
    """An operation was called on an instance outside its domain."""


class ResourceLimitError(TuicpError, RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ConsistencyError(TuicpError, AssertionError):
    """Computed bounds cross each other, which points at an implementation bug."""
