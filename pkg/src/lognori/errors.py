"""Exception types shared across the package."""

from __future__ import annotations


class ResourceCapError(RuntimeError):
    """A search exceeded a configured bound.

    Raised instead of returning an answer that might be wrong; callers that
    report verdicts translate it into an "unknown" outcome.
    """

    def __init__(self, what: str, bound: int):
        super().__init__(f"{what} exceeded cap {bound}")
        self.what = what
        self.bound = bound


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class NilpotencyError(PreconditionError):
    """A truncated exp/log argument is not nilpotent enough."""

    def __init__(self, power: int):
        super().__init__(f"argument raised to the power {power} is nonzero")
        self.power = power
