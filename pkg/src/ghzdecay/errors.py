"""Exception types raised by ghzdecay."""


class GHZDecayError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(GHZDecayError, ValueError):
    """A local dimension, qudit count or matrix shape is out of range."""


class CapacityError(GHZDecayError):
    """A dense matrix would exceed the configured size cap."""

    def __init__(self, dim, cap):
        self.dim = dim
        self.cap = cap
        super().__init__(f"dense dimension d^N = {dim} exceeds cap {cap}")


class UnsupportedClosedFormError(GHZDecayError, ValueError):
    """A closed-form expression was requested outside its domain (odd N)."""
