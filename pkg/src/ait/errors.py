"""Exception hierarchy shared by every layer of the lab."""

from __future__ import annotations


class AITError(Exception):
    """Base class for all errors raised by this package."""


class MalformedCode(AITError, ValueError):
    """A bit string is not a valid prefix code word or pair encoding."""


class UnsupportedOracle(AITError, ValueError):
    """An oracle kind cannot be used for the requested combinator."""


class UnknownMachine(AITError, KeyError):
    pass


class NotInTable(AITError, KeyError):
    """No halting program for the target was found within the budget.

    This is budget-bounded absence, not a claim that the complexity is infinite.
    """


class IncompatibleTables(AITError, ValueError):
    pass


class ResourceLimit(AITError, RuntimeError):
    pass


class ZeroDenominator(AITError, ZeroDivisionError):
    pass


class OperatorOutputFinite(AITError, RuntimeError):
    """An operator's output on some oracle could not be resolved to an infinite sequence."""


class WitnessMismatch(AITError, ValueError):
    pass


class ConfigError(AITError, ValueError):
    pass


class CertifiedInvariantBroken(AITError, AssertionError):
    """A budget-independent exact fact failed; this indicates an implementation bug."""
