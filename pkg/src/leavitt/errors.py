"""Exception hierarchy shared by the whole package.

``ParseError`` flags ill-formed textual input; every other subclass of
``LeavittError`` flags a mathematically impossible request.  The CLI maps
the former to exit code 2 and the latter to exit code 1.
"""


class LeavittError(Exception):
    """Base class for all domain errors raised by this package."""


class ShapeError(LeavittError):
    """Incompatible shapes, dimensions, or out-of-range indices."""


class ParseError(LeavittError):
    """Ill-formed textual input."""


class NotUnitaryError(LeavittError):
    """A matrix expected to be unitary is not."""


class NotPositiveUnitaryError(LeavittError):
    """A unitary matrix admits no tree-pair preimage within the search bound."""


class NoIsomorphismError(LeavittError):
    """The requested matrix rings are not isomorphic (gcd invariant)."""


class NotFixedError(LeavittError):
    """A germ was requested at a point the element does not fix."""
