"""Core domain types for dynamic graphs, snapshots, and the snapshot tree.

A dynamic graph is an ordered sequence of timestamped frames over a fixed
node universe.  A snapshot wraps one or more consecutive frames and exposes
their union topology; a snapshot tree stacks layers of snapshots of
increasing time granularity.  All types are immutable after construction and
safe to share across threads for reading; tree mutation happens only through
the engine's generation session.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CannotDeleteBase,
    EmptyDataset,
    NonContiguousRun,
    UnorderedTimestamps,
)

# An undirected link, stored canonically with a < b.
Pair = tuple[int, int]


def canonical_pair(a: int, b: int) -> Pair:
    """Order an undirected link's endpoints; self-links are rejected."""
    if a == b:
        raise ValueError(f"self-link on node {a}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class NodeUniverse:
    """Fixed, ordered roster of nodes for one dataset.

    The ordering defines the vector layout used everywhere downstream, so it
    must not change for the lifetime of a dataset.  ``class_label`` carries
    the node class (the player's team in tracking data).
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        ids = [node_id for node_id, _ in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("node_ids must be unique")

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[str, str]]) -> "NodeUniverse":
        return cls(tuple((str(n), str(c)) for n, c in entries))

    @cached_property
    def index(self) -> dict[str, int]:
        return {node_id: i for i, (node_id, _) in enumerate(self.entries)}

    def __len__(self) -> int:
        return len(self.entries)

    def ordinal(self, node_id: str) -> int:
        return self.index[node_id]

    def node_id(self, ordinal: int) -> str:
        return self.entries[ordinal][0]

    def class_label(self, ordinal: int) -> str:
        return self.entries[ordinal][1]


@dataclass(frozen=True)
class TimestampedGraph:
    """One frame of the dynamic graph: topology plus per-node attributes.

    Positions are court units (feet on a 94x50 NBA court by default) and
    speeds are court units per second.  Positions and speeds are defined for
    exactly the present nodes, and every link endpoint must be present.
    """

    timestamp: float
    present_nodes: frozenset[int]
    links: frozenset[Pair]
    positions: Mapping[int, tuple[float, float]]
    speeds: Mapping[int, float]

    def __post_init__(self):
        if not math.isfinite(self.timestamp):
            raise ValueError("timestamp must be finite")
        for a, b in self.links:
            if a == b:
                raise ValueError(f"self-link on node {a}")
            if a > b:
                raise ValueError(f"link ({a},{b}) not in canonical a<b order")
            if a not in self.present_nodes or b not in self.present_nodes:
                raise ValueError(f"link ({a},{b}) endpoint not present")
        if set(self.positions) != self.present_nodes:
            raise ValueError("positions must be defined exactly for present nodes")
        if set(self.speeds) != self.present_nodes:
            raise ValueError("speeds must be defined exactly for present nodes")
        for node, speed in self.speeds.items():
            if speed < 0:
                raise ValueError(f"negative speed for node {node}")

    @classmethod
    def build(
        cls,
        timestamp: float,
        positions: Mapping[int, tuple[float, float]],
        speeds: Mapping[int, float],
        links: Iterable[tuple[int, int]] = (),
    ) -> "TimestampedGraph":
        """Convenience constructor that canonicalizes links."""
        return cls(
            timestamp=float(timestamp),
            present_nodes=frozenset(positions),
            links=frozenset(canonical_pair(a, b) for a, b in links),
            positions=dict(positions),
            speeds=dict(speeds),
        )


@dataclass(frozen=True)
class ChangeThresholds:
    """User-defined merge gates: maximum change degrees and frame-count cap."""

    node_change_max: float
    link_change_max: float
    time_gap_max: float
    frame_count_max: int | None = None

    def __post_init__(self):
        for name in ("node_change_max", "link_change_max", "time_gap_max"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative")
        if self.frame_count_max is not None and self.frame_count_max < 1:
            raise ValueError("frame_count_max must be >= 1 when present")

    def to_dict(self) -> dict:
        return {
            "node_change_max": self.node_change_max,
            "link_change_max": self.link_change_max,
            "time_gap_max": self.time_gap_max,
            "frame_count_max": self.frame_count_max,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChangeThresholds":
        cap = data.get("frame_count_max")
        return cls(
            node_change_max=float(data["node_change_max"]),
            link_change_max=float(data["link_change_max"]),
            time_gap_max=float(data["time_gap_max"]),
            frame_count_max=None if cap is None else int(cap),
        )


@dataclass(frozen=True)
class Snapshot:
    """One or more consecutive frames merged into a single static graph.

    ``frame_range`` is the half-open index range of the wrapped frames within
    the originating dataset; contiguity checks and lineage reconstruction rely
    on it.  The union topology keeps per-link occurrence counts so the link
    frequency survives merging (it drives link-width encodings downstream).
    """

    id: str
    frames: tuple[TimestampedGraph, ...]
    frame_range: tuple[int, int]
    node_union: frozenset[int]
    link_union: frozenset[Pair]
    link_counts: Mapping[Pair, int]
    time_span: tuple[float, float]

    @classmethod
    def from_frames(
        cls,
        id: str,
        frames: Sequence[TimestampedGraph],
        start_index: int,
    ) -> "Snapshot":
        if not frames:
            raise EmptyDataset("a snapshot needs at least one frame")
        counts = Counter()
        nodes: set[int] = set()
        for frame in frames:
            nodes.update(frame.present_nodes)
            counts.update(frame.links)
        return cls(
            id=id,
            frames=tuple(frames),
            frame_range=(start_index, start_index + len(frames)),
            node_union=frozenset(nodes),
            link_union=frozenset(counts),
            link_counts=dict(counts),
            time_span=(frames[0].timestamp, frames[-1].timestamp),
        )

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @cached_property
    def indicators(self):
        """Snapshot indicators at the package-default epsilon (lazy)."""
        from .features import snapshot_indicators

        return snapshot_indicators(self)


def merge_snapshots(run: Sequence[Snapshot], id: str | None = None) -> Snapshot:
    """Merge a contiguous run of snapshots into one.

    Frames concatenate in order; the union topology, link counts, and time
    span follow from the Snapshot invariants.  Indicators of the merged
    snapshot are recomputed (lazily) rather than combined from the parts.
    """
    if not run:
        raise EmptyDataset("cannot merge an empty run of snapshots")
    for prev, nxt in zip(run, run[1:]):
        if prev.frame_range[1] != nxt.frame_range[0]:
            raise NonContiguousRun(
                f"snapshot {nxt.id} does not follow {prev.id} "
                f"({prev.frame_range} -> {nxt.frame_range})"
            )
    frames: list[TimestampedGraph] = []
    for snap in run:
        frames.extend(snap.frames)
    start = run[0].frame_range[0]
    if id is None:
        id = f"m{start}:{start + len(frames)}"
    return Snapshot.from_frames(id, frames, start)


class SnapshotTree:
    """Ordered layers of snapshots; layer 0 wraps the raw frames one-to-one.

    Every layer partitions the same frame sequence, so the total frame count
    is conserved across layers and each snapshot's parents form a contiguous
    run in the layer below.  Construct via :func:`build_layer_zero`, then
    extend/trim through the engine's generation session.
    """

    def __init__(self, base_layer: Sequence[Snapshot]):
        if not base_layer:
            raise EmptyDataset("layer 0 cannot be empty")
        for snap in base_layer:
            if snap.frame_count != 1:
                raise ValueError("layer 0 snapshots must wrap exactly one frame")
        self._layers: list[list[Snapshot]] = [list(base_layer)]
        self._lineage: dict[str, list[str]] = {}
        self._layer_params: dict[int, ChangeThresholds] = {}
        self._check_layer_contiguity(0)

    # -- read access --------------------------------------------------------

    @property
    def layers(self) -> list[list[Snapshot]]:
        return [list(layer) for layer in self._layers]

    def layer(self, index: int) -> list[Snapshot]:
        return list(self._layers[index])

    @property
    def lineage(self) -> dict[str, list[str]]:
        return dict(self._lineage)

    @property
    def layer_params(self) -> dict[int, ChangeThresholds]:
        return dict(self._layer_params)

    @property
    def depth(self) -> int:
        return len(self._layers)

    @property
    def top_index(self) -> int:
        return len(self._layers) - 1

    @property
    def top_layer(self) -> list[Snapshot]:
        return list(self._layers[-1])

    @property
    def frame_count(self) -> int:
        return sum(snap.frame_count for snap in self._layers[0])

    def find_snapshot(self, snapshot_id: str) -> Snapshot | None:
        for layer in self._layers:
            for snap in layer:
                if snap.id == snapshot_id:
                    return snap
        return None

    def __iter__(self) -> Iterator[list[Snapshot]]:
        return iter(self.layers)

    # -- mutation (engine session only) --------------------------------------

    def append_layer(
        self, snapshots: Sequence[Snapshot], thresholds: ChangeThresholds
    ) -> int:
        """Add a merged layer on top, assigning canonical ids and lineage.

        Snapshot ids are deterministic (``s<layer>_<ordinal>``) so identical
        inputs always yield identical trees.  Lineage is reconstructed from
        frame ranges: each new snapshot's parents are the previous-layer
        snapshots its range covers.
        """
        index = len(self._layers)
        named = [
            replace(snap, id=f"s{index}_{i}") for i, snap in enumerate(snapshots)
        ]
        below = self._layers[-1]
        lineage: dict[str, list[str]] = {}
        cursor = 0
        for snap in named:
            parents = []
            while cursor < len(below) and (
                below[cursor].frame_range[1] <= snap.frame_range[1]
            ):
                parents.append(below[cursor].id)
                cursor += 1
            first = below[cursor - len(parents)] if parents else None
            if (
                not parents
                or first.frame_range[0] != snap.frame_range[0]
                or below[cursor - 1].frame_range[1] != snap.frame_range[1]
            ):
                raise ValueError(
                    f"snapshot {snap.id} range {snap.frame_range} does not "
                    "partition the layer below"
                )
            lineage[snap.id] = parents
        if cursor != len(below):
            raise ValueError("new layer does not cover every snapshot below")
        self._layers.append(named)
        self._lineage.update(lineage)
        self._layer_params[index] = thresholds
        self._check_layer_contiguity(index)
        return index

    def remove_top_layer(self) -> None:
        if len(self._layers) == 1:
            raise CannotDeleteBase("layer 0 is never deletable")
        removed = self._layers.pop()
        for snap in removed:
            self._lineage.pop(snap.id, None)
        self._layer_params.pop(len(self._layers), None)

    # -- integrity ------------------------------------------------------------

    def _check_layer_contiguity(self, index: int) -> None:
        layer = self._layers[index]
        for prev, nxt in zip(layer, layer[1:]):
            if prev.frame_range[1] != nxt.frame_range[0]:
                raise ValueError(
                    f"layer {index} is not contiguous at {prev.id} -> {nxt.id}"
                )

    def validate(self) -> None:
        """Check every tree invariant; raises AssertionError on violation."""
        base_count = self.frame_count
        for k, layer in enumerate(self._layers):
            assert sum(s.frame_count for s in layer) == base_count, (
                f"frame count not conserved at layer {k}"
            )
            for prev, nxt in zip(layer, layer[1:]):
                assert prev.frame_range[1] == nxt.frame_range[0], (
                    f"layer {k} not contiguous"
                )
            if k == 0:
                assert all(s.frame_count == 1 for s in layer)
                continue
            below_ids = [s.id for s in self._layers[k - 1]]
            claimed: list[str] = []
            for snap in layer:
                parents = self._lineage.get(snap.id)
                assert parents, f"{snap.id} has no lineage"
                claimed.extend(parents)
            assert claimed == below_ids, (
                f"layer {k - 1} snapshots are not partitioned into contiguous "
                "single-child runs"
            )

    # -- digests ----------------------------------------------------------------

    def layer_digest(self, index: int) -> str:
        """Content hash of one layer (topology, spans, counts; not indicators)."""
        payload = [
            [
                snap.id,
                list(snap.frame_range),
                list(snap.time_span),
                sorted(snap.node_union),
                sorted([a, b, snap.link_counts[(a, b)]] for a, b in snap.link_union),
            ]
            for snap in self._layers[index]
        ]
        return _sha256_json(payload)

    def digest(self) -> str:
        payload = {
            "layers": [self.layer_digest(k) for k in range(len(self._layers))],
            "params": {
                str(k): th.to_dict() for k, th in self._layer_params.items()
            },
        }
        return _sha256_json(payload)


def _sha256_json(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def build_layer_zero(
    frames: Sequence[TimestampedGraph], start_index: int = 0
) -> SnapshotTree:
    """Wrap each frame in a single-frame snapshot and return the base tree.

    ``start_index`` anchors frame ranges in dataset coordinates, so a tree
    built over a selection keeps addressing the original frame indices.
    """
    if not frames:
        raise EmptyDataset("no frames supplied")
    for prev, nxt in zip(frames, frames[1:]):
        if nxt.timestamp < prev.timestamp:
            raise UnorderedTimestamps(
                f"timestamp {nxt.timestamp} follows {prev.timestamp}"
            )
    base = [
        Snapshot.from_frames(f"s0_{i}", [frame], start_index + i)
        for i, frame in enumerate(frames)
    ]
    return SnapshotTree(base)
