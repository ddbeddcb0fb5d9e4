from __future__ import annotations


class MConvexError(Exception):
    """Base class for every error raised by the library."""


class UsageError(MConvexError, ValueError):
    """Bad arguments: width mismatch, out-of-range parameter, uncertified input."""


class EmptyResult(MConvexError):
    """The operation would produce an empty point set."""


class NoWitness(MConvexError):
    """A witness constructor was called on a pair that admits no witness."""


class CapExceeded(MConvexError):
    """A configured size cap was hit; checkers report this as a skip."""

    def __init__(self, cap: str, value: int, limit: int):
        self.cap = cap
        self.value = value
        self.limit = limit
        super().__init__(f"{cap}: {value} exceeds cap {limit}")


class Disagreement(MConvexError):
    """Two independent computations of the same object differ."""
