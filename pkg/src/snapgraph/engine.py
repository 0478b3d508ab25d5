"""Threshold-gated greedy merging and the interactive generation session.

Change degrees quantify the edit distance between two snapshots' hot
vectors, normalized by the first snapshot's node/link counts, plus the time
gap between them.  A merge pass walks the layer left to right, accumulating
a current snapshot and merging the next one in while every degree stays at
or below its user threshold; the session wraps the pass with an append-only
history so trees are replayable and layer operations are undoable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import LayerNotTop, UniverseMismatch
from .model import (
    ChangeThresholds,
    NodeUniverse,
    Snapshot,
    SnapshotTree,
    TimestampedGraph,
    build_layer_zero,
    merge_snapshots,
)


@dataclass(frozen=True)
class ChangeDegrees:
    """Node/link change fractions and the time gap between two snapshots."""

    node_change: float
    link_change: float
    time_gap: float


def change_degrees(
    s1: Snapshot, s2: Snapshot, universe: NodeUniverse
) -> ChangeDegrees:
    """Edit-distance change degrees from snapshot ``s1`` to ``s2``.

    The L1 distance between two 0/1 presence vectors equals the symmetric
    difference of the encoded sets, so the degrees are computed directly on
    the unions.  Denominators are clamped to 1 so an empty ``s1`` compares
    finitely (an empty-vs-nonempty pair then scores the raw addition count,
    which correctly blocks merging).
    """
    n = len(universe)
    for snap in (s1, s2):
        if any(node >= n or node < 0 for node in snap.node_union):
            raise UniverseMismatch(
                f"snapshot {snap.id} has ordinals outside a universe of {n}"
            )
    node_l1 = len(s1.node_union ^ s2.node_union)
    link_l1 = len(s1.link_union ^ s2.link_union)
    return ChangeDegrees(
        node_change=node_l1 / max(len(s1.node_union), 1),
        link_change=link_l1 / max(len(s1.link_union), 1),
        time_gap=abs(s2.time_span[0] - s1.time_span[1]),
    )


def merge_condition(
    d: ChangeDegrees, th: ChangeThresholds, merged_count: int
) -> bool:
    """True when every change degree sits at or below its threshold.

    Comparisons are inclusive (a degree equal to its threshold still merges)
    and ``merged_count`` is the frame count the merged snapshot would have.
    """
    return (
        d.node_change <= th.node_change_max
        and d.link_change <= th.link_change_max
        and d.time_gap <= th.time_gap_max
        and (th.frame_count_max is None or merged_count <= th.frame_count_max)
    )


class _RunAccumulator:
    """Incremental union state for the snapshot being grown by the pass.

    Holds exactly the quantities change_degrees needs (presence unions and
    the end timestamp), so the greedy pass never re-scans merged frames.
    """

    def __init__(self, snap: Snapshot):
        self.run = [snap]
        self.nodes = set(snap.node_union)
        self.links = set(snap.link_union)
        self.end_time = snap.time_span[1]
        self.frame_count = snap.frame_count

    def degrees_to(self, nxt: Snapshot) -> ChangeDegrees:
        return ChangeDegrees(
            node_change=len(self.nodes ^ nxt.node_union) / max(len(self.nodes), 1),
            link_change=len(self.links ^ nxt.link_union) / max(len(self.links), 1),
            time_gap=abs(nxt.time_span[0] - self.end_time),
        )

    def absorb(self, nxt: Snapshot) -> None:
        self.run.append(nxt)
        self.nodes |= nxt.node_union
        self.links |= nxt.link_union
        self.end_time = nxt.time_span[1]
        self.frame_count += nxt.frame_count

    def emit(self) -> Snapshot:
        return merge_snapshots(self.run)


def generate_layer(
    layer: Sequence[Snapshot],
    th: ChangeThresholds,
    universe: NodeUniverse,
) -> list[Snapshot]:
    """One greedy left-to-right merge pass over a layer.

    The accumulated snapshot (not the last raw frame) is compared against
    each next snapshot; on a failed gate the accumulator is emitted and the
    pass restarts from the failing snapshot.  Output order preserves input
    order and the concatenated frames are unchanged.
    """
    if not layer:
        raise ValueError("cannot generate from an empty layer")
    n = len(universe)
    for snap in layer:
        if any(node >= n or node < 0 for node in snap.node_union):
            raise UniverseMismatch(
                f"snapshot {snap.id} has ordinals outside a universe of {n}"
            )
    merged: list[Snapshot] = []
    acc = _RunAccumulator(layer[0])
    for nxt in layer[1:]:
        degrees = acc.degrees_to(nxt)
        if merge_condition(degrees, th, acc.frame_count + nxt.frame_count):
            acc.absorb(nxt)
        else:
            merged.append(acc.emit())
            acc = _RunAccumulator(nxt)
    merged.append(acc.emit())
    return merged


@dataclass(frozen=True)
class HistoryEntry:
    """One layer operation: name, parameters, and the resulting layer digest."""

    op: str
    thresholds: ChangeThresholds | None
    layer_digest: str

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "thresholds": None if self.thresholds is None else self.thresholds.to_dict(),
            "layer_digest": self.layer_digest,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "HistoryEntry":
        th = data.get("thresholds")
        return cls(
            op=data["op"],
            thresholds=None if th is None else ChangeThresholds.from_dict(th),
            layer_digest=data["layer_digest"],
        )


class GenerationSession:
    """Human-in-loop tree building over a fixed frame selection.

    All mutation happens through this class and is serialized by a lock, so
    a session has a single writer while reads of the finished tree may
    proceed concurrently.  The history is append-only and replaying it from
    layer 0 reproduces the tree digest exactly.
    """

    def __init__(
        self,
        universe: NodeUniverse,
        frames: Sequence[TimestampedGraph],
        start_index: int = 0,
    ):
        self.universe = universe
        self._frames = tuple(frames)
        self._start_index = start_index
        self.tree: SnapshotTree = build_layer_zero(frames, start_index)
        self._history: list[HistoryEntry] = []
        self._lock = threading.Lock()

    @property
    def history(self) -> list[HistoryEntry]:
        return list(self._history)

    def generate(
        self, thresholds: ChangeThresholds, from_layer: int | None = None
    ) -> int:
        """Merge the top layer under ``thresholds`` and append the result.

        ``from_layer``, when given, must be the current top layer; layers
        above a re-generation target must be deleted first.
        """
        with self._lock:
            if from_layer is not None and from_layer != self.tree.top_index:
                raise LayerNotTop(
                    f"layer {from_layer} is not the top "
                    f"(top is {self.tree.top_index}); delete above it first"
                )
            return self._generate_locked(thresholds, op="generate")

    def delete_top(self) -> None:
        """Remove the top layer; layer 0 is never deletable."""
        with self._lock:
            self.tree.remove_top_layer()
            self._history.append(
                HistoryEntry(
                    op="delete",
                    thresholds=None,
                    layer_digest=self.tree.layer_digest(self.tree.top_index),
                )
            )

    def regenerate_top(self, thresholds: ChangeThresholds) -> int:
        """Replace the top layer: delete it, then generate with ``thresholds``."""
        with self._lock:
            self.tree.remove_top_layer()
            return self._generate_locked(thresholds, op="regenerate")

    def _generate_locked(self, thresholds: ChangeThresholds, op: str) -> int:
        layer = generate_layer(self.tree.top_layer, thresholds, self.universe)
        index = self.tree.append_layer(layer, thresholds)
        self._history.append(
            HistoryEntry(
                op=op,
                thresholds=thresholds,
                layer_digest=self.tree.layer_digest(index),
            )
        )
        return index

    # -- persistence / replay -------------------------------------------------

    def history_dicts(self) -> list[dict]:
        return [entry.to_dict() for entry in self._history]

    @classmethod
    def replay(
        cls,
        universe: NodeUniverse,
        frames: Sequence[TimestampedGraph],
        history: Sequence[Mapping],
        start_index: int = 0,
    ) -> "GenerationSession":
        """Rebuild a session by re-applying a serialized history log."""
        session = cls(universe, frames, start_index)
        for raw in history:
            entry = HistoryEntry.from_dict(raw)
            if entry.op == "generate":
                session.generate(entry.thresholds)
            elif entry.op == "delete":
                session.delete_top()
            elif entry.op == "regenerate":
                session.regenerate_top(entry.thresholds)
            else:
                raise ValueError(f"unknown session op {entry.op!r}")
        return session
