"""Exception types shared across the package."""

from __future__ import annotations


class ZsinvError(Exception):
    """Base class for package errors."""


class InfiniteInvariant(ZsinvError):
    """The invariant is infinite: the length set misses every multiple of exp(G)."""


class BudgetExceeded(ZsinvError):
    """A search hit its node or time budget before proving exactness.

    Carries the best-known partial outcome (a lower bound) in `partial`.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class HypothesisUnmet(ZsinvError):
    """An operation's theorem hypothesis does not hold for the given input."""


class ExtractionFailed(ZsinvError):
    """A certificate extraction failed although the decision procedure said it
    must succeed.  This always indicates a bug; it is never a normal outcome."""
