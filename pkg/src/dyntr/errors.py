"""Exception types shared by the graph structures, engines, and CLI."""

from __future__ import annotations


class DynTrError(Exception):
    """Base class for every error raised by this package."""


class DuplicateEdge(DynTrError):
    """An inserted edge is already present (or repeated within one batch)."""


class NotIncident(DynTrError):
    """A centered insertion contains an edge not touching the center."""


class CycleCreated(DynTrError):
    """An insertion would create a directed cycle while in DAG mode."""


class MissingEdge(DynTrError):
    """An operation referenced an edge that is not currently live."""


class CyclicInput(DynTrError):
    """An acyclic graph was required but the input contains a cycle."""


class NotInterScc(DynTrError):
    """A parallel-group lookup was made for an edge inside a single SCC."""


class NotStronglyConnected(DynTrError):
    """A minimal spanning-subset request on a non strongly connected input."""


class SingularMatrix(DynTrError):
    """The symbolic adjacency matrix stayed singular after resampling."""


class DenominatorZero(DynTrError):
    """A rank-one inverse update hit a zero denominator and could not recover."""


class ParseError(DynTrError):
    """A stream line could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class StreamCheckError(DynTrError):
    """An engine's output disagreed with the oracle during a checked run."""
