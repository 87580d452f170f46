"""Exception hierarchy shared by every matchlab module."""

from __future__ import annotations


class MatchlabError(Exception):
    """Base class for all library errors."""


class InvalidQueryError(MatchlabError, ValueError):
    """A query violates the preconditions of the operation."""


class InvalidConstructionError(MatchlabError, ValueError):
    """A construction was requested with parameters outside its domain."""


class FormatError(MatchlabError, ValueError):
    """A text file does not follow the expected format."""


class ResourceGuardError(MatchlabError):
    """An exhaustive computation would exceed its configured size guard."""

    def __init__(self, message: str, estimate: int, limit: int):
        super().__init__(f"{message} (estimate {estimate}, limit {limit})")
        self.estimate = estimate
        self.limit = limit


class SearchBudgetExceeded(MatchlabError):
    """The exact search ran out of nodes before deciding the instance."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"search undecided after {nodes} nodes (budget {budget})")
        self.nodes = nodes
        self.budget = budget


class PreconditionError(MatchlabError, ValueError):
    """A quantitative hypothesis of a constructive procedure does not hold."""


class InvariantViolation(MatchlabError, AssertionError):
    """Internal bookkeeping broke; always indicates a bug."""


class VerificationError(MatchlabError):
    """A produced object failed its independent check."""
