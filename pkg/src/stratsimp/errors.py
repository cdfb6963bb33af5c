from __future__ import annotations


class StratError(Exception):
    """Base class for library errors."""


class ParseError(StratError):
    pass


class BudgetExceeded(StratError):
    pass


class InvariantBreach(StratError):
    """An internal consistency check failed."""
