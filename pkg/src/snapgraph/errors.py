"""Exception hierarchy shared by all snapgraph modules.

Every error raised on purpose derives from :class:`SnapgraphError`, so callers
(CLI, HTTP service) can map failures to exit codes / status codes in one place.
"""

from __future__ import annotations


class SnapgraphError(Exception):
    """Base class for all errors raised by this package."""


# --- dataset / model errors -------------------------------------------------

class EmptyDataset(SnapgraphError):
    """A frame sequence was required but none were supplied."""


class UnorderedTimestamps(SnapgraphError):
    """Frame timestamps decrease somewhere in the sequence."""


class NonContiguousRun(SnapgraphError):
    """Snapshots passed to a merge are not adjacent in layer order."""


# --- ingest errors ----------------------------------------------------------

class MalformedRow(SnapgraphError):
    """A CSV row failed to parse or violated a field invariant."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NonMonotoneTimestamps(SnapgraphError):
    """Tracking rows are not grouped by non-decreasing timestamp."""


class UnknownUnits(SnapgraphError):
    """Dataset config does not define the court dimensions."""


class MissingPositions(SnapgraphError):
    """A present node has no position, so links cannot be induced."""


class ScoreRegression(SnapgraphError):
    """A team score decreased over the event sequence."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# --- feature errors ---------------------------------------------------------

class OrdinalOutOfRange(SnapgraphError):
    """A node ordinal does not fit the vector layout of the universe."""


class NegativeInput(SnapgraphError):
    """A speed or distance argument was negative."""


class EmptySnapshot(SnapgraphError):
    """Graph stability is undefined for a snapshot with no nodes."""


class NodeAbsent(SnapgraphError):
    """The node is not present in the requested frame."""


# --- engine errors ----------------------------------------------------------

class UniverseMismatch(SnapgraphError):
    """Snapshot ordinals do not fit the supplied node universe."""


class LayerNotTop(SnapgraphError):
    """Generation may only extend the current top layer."""


class CannotDeleteBase(SnapgraphError):
    """Layer 0 (the raw frames) is never deletable."""


# --- projection errors ------------------------------------------------------

class TooFewPoints(SnapgraphError):
    """The projection needs at least two input vectors."""


class DimensionMismatch(SnapgraphError):
    """Input vectors do not share a common length."""


# --- service / cli errors ---------------------------------------------------

class NonContiguousSelection(SnapgraphError):
    """Session selections must be contiguous frame ranges."""


class RangeInvalid(SnapgraphError):
    """A requested frame range falls outside the dataset."""


class UnknownDataset(SnapgraphError):
    """No dataset with the requested id exists."""


class UnknownSession(SnapgraphError):
    """No session with the requested id exists."""


class UnknownSnapshot(SnapgraphError):
    """No snapshot with the requested id exists in the session tree."""


class ConfigError(SnapgraphError):
    """Invalid run configuration (CLI exit code 2)."""
