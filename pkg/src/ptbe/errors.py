"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PtbeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PtbeError):
    """Caller supplied arguments that do not satisfy an operation's precondition."""


class InvariantViolation(InputError):
    """A value would break the invariants of its type (duplicate edge, self-loop, ...)."""


class MalformedDocument(InputError):
    """An instance document could not be decoded or has the wrong shape."""


class UnknownKind(InputError):
    """An instance document declares a ``kind`` that is not recognized."""


class UnsupportedInstance(PtbeError):
    """The instance is valid but outside the class an algorithm handles."""


class GuardExceeded(PtbeError):
    """A brute-force size guard or enumeration cap was exceeded."""


class ValidationFailure(PtbeError):
    """A generated instance failed one of the structural claims of its construction."""
