"""Shared exception types."""

from __future__ import annotations


class FileFormatError(ValueError):
    """A JSON input file does not conform to one of the toolkit formats."""


class ClosureError(ValueError):
    """A candidate span is not closed under the product.

    Carries the 1-based indices of the first violating pair.
    """

    def __init__(self, i: int, j: int, message: str | None = None):
        self.pair = (i, j)
        super().__init__(message or f"span not closed: product of basis element {i} with {j} leaves the span")


class MinorsInapplicableError(ValueError):
    """The minor method needs strictly fewer known columns than rows."""


class ProtocolError(ValueError):
    """A sample set is missing a required probe vector."""


class CounterexampleError(Exception):
    """A sampled map disagrees with the single recovered candidate map.

    Carries the failing input vector plus the expected and observed images.
    """

    def __init__(self, x, expected, got):
        self.x = x
        self.expected = expected
        self.got = got
        super().__init__(f"sample mismatch at x={x!r}: expected {expected!r}, got {got!r}")
