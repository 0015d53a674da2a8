"""Exception hierarchy shared by every subsystem."""

from __future__ import annotations


class AdaptGraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphInputError(AdaptGraphError, ValueError):
    """Bad caller input: out-of-range ids, self-loops, negative weights..."""


class GraphStateError(AdaptGraphError):
    """Operation not valid for the current edge set (double insert, missing delete)."""


class MigrationError(AdaptGraphError):
    """A representation migration failed part way.

    ``nodes_transferred`` counts the source nodes whose edges were already
    moved (and released from the source) when the failure happened.
    ``partial`` holds the partially filled target store, if one was allocated.
    """

    def __init__(self, message: str, *, nodes_transferred: int = 0, partial=None):
        super().__init__(message)
        self.nodes_transferred = nodes_transferred
        self.partial = partial


class ParseError(AdaptGraphError, ValueError):
    """Text input rejected; ``line`` is 1-based, or None when not line specific."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PolicyParseError(ParseError):
    pass


class EdgeListParseError(ParseError):
    pass


class LogError(AdaptGraphError):
    """An adaptation event log is not well nested."""


class ConfigError(AdaptGraphError, ValueError):
    """Invalid benchmark run configuration."""


class AdaptationAborted(AdaptGraphError):
    """An adaptive run stopped because a migration failed.

    Carries the partial-state report: the progress reached, the events logged
    so far and the underlying :class:`MigrationError`.
    """

    def __init__(self, message: str, *, progress_percent: float, events, cause: MigrationError):
        super().__init__(message)
        self.progress_percent = progress_percent
        self.events = events
        self.cause = cause
