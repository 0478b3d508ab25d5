"""Graph vectorization and attribute/indicator computation.

The combined vector hot-encodes node presence and link presence against a
fixed universe; link presence is flattened in canonical upper-triangle order
so each undirected link occupies exactly one slot.  Indicators cover player
speed, degree, link distance, link stability (reciprocal of endpoint speeds
plus distance), and graph stability (link-count-squared times summed speeds
over node count times summed distances).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean

import numpy as np

from .errors import EmptySnapshot, NegativeInput, NodeAbsent, OrdinalOutOfRange
from .model import NodeUniverse, Pair, Snapshot, TimestampedGraph

# Single global epsilon, in court units, guarding every divisor.
DEFAULT_EPS = 1e-6


def pair_index(a: int, b: int, n: int) -> int:
    """Slot of link (a, b), a < b, in the upper-triangle flattening.

    The order is (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
    """
    if not 0 <= a < b < n:
        raise OrdinalOutOfRange(f"pair ({a},{b}) does not fit a universe of {n}")
    return a * (2 * n - a - 1) // 2 + (b - a - 1)


def link_vector_length(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class CombinedVector:
    """Hot-encoded node vector plus flattened link vector for one snapshot."""

    node_vec: np.ndarray
    link_vec: np.ndarray

    def __post_init__(self):
        n = self.node_vec.shape[0]
        if self.link_vec.shape[0] != link_vector_length(n):
            raise ValueError("link vector length does not match node count")

    @property
    def universe_size(self) -> int:
        return int(self.node_vec.shape[0])

    def combined(self) -> np.ndarray:
        return np.concatenate([self.node_vec, self.link_vec])

    def __len__(self) -> int:
        return int(self.node_vec.shape[0] + self.link_vec.shape[0])


def vectorize(snapshot: Snapshot, universe: NodeUniverse) -> CombinedVector:
    """Presence encoding of the snapshot's node and link unions."""
    n = len(universe)
    node_vec = np.zeros(n, dtype=np.uint8)
    link_vec = np.zeros(link_vector_length(n), dtype=np.uint8)
    for node in snapshot.node_union:
        if not 0 <= node < n:
            raise OrdinalOutOfRange(f"node ordinal {node} outside universe of {n}")
        node_vec[node] = 1
    for a, b in snapshot.link_union:
        link_vec[pair_index(a, b, n)] = 1
    return CombinedVector(node_vec=node_vec, link_vec=link_vec)


def link_distance(p_a: tuple[float, float], p_b: tuple[float, float]) -> float:
    """Euclidean distance between two positions, in court units."""
    return math.hypot(p_a[0] - p_b[0], p_a[1] - p_b[1])


def link_stability(
    speed_a: float, speed_b: float, distance: float, eps: float = DEFAULT_EPS
) -> float:
    """Reciprocal of combined endpoint speeds plus link distance plus eps.

    Strictly decreasing in each argument: slow, close endpoints make a
    stable link.
    """
    if speed_a < 0 or speed_b < 0 or distance < 0:
        raise NegativeInput("speeds and distance must be non-negative")
    return 1.0 / (speed_a + speed_b + distance + eps)


def player_degree(snapshot: Snapshot, node: int, frame_index: int) -> int:
    """Number of links incident to ``node`` in one frame of the snapshot."""
    frame = snapshot.frames[frame_index]
    if node not in frame.present_nodes:
        raise NodeAbsent(f"node {node} not present in frame {frame_index}")
    return sum(1 for a, b in frame.links if a == node or b == node)


def _node_mean_speeds(snapshot: Snapshot) -> dict[int, float]:
    """Per-node speed averaged over the frames where the node is present."""
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for frame in snapshot.frames:
        for node, speed in frame.speeds.items():
            sums[node] = sums.get(node, 0.0) + speed
            counts[node] = counts.get(node, 0) + 1
    return {node: sums[node] / counts[node] for node in sums}


def _link_mean_distances(snapshot: Snapshot) -> dict[Pair, float]:
    """Per-link distance averaged over the frames where the link occurs."""
    sums: dict[Pair, float] = {}
    counts: dict[Pair, int] = {}
    for frame in snapshot.frames:
        for pair in frame.links:
            a, b = pair
            d = link_distance(frame.positions[a], frame.positions[b])
            sums[pair] = sums.get(pair, 0.0) + d
            counts[pair] = counts.get(pair, 0) + 1
    return {pair: sums[pair] / counts[pair] for pair in sums}


def graph_stability(
    snapshot: Snapshot,
    eps: float = DEFAULT_EPS,
    speed_inverse: bool = False,
) -> float:
    """Stability of a snapshot: m^2 * sum(speeds) / (n * sum(distances) + eps).

    ``m`` counts distinct links, ``n`` counts nodes in the union.  For merged
    snapshots, each node's speed and each link's distance are first averaged
    across the frames in which they appear, then summed.

    ``speed_inverse`` moves the summed speed into the denominator
    (m^2 / (n * sum(distances) + sum(speeds) + eps)), matching the reading
    that slow networks are stable; the default follows the formula as
    printed, where higher summed speed raises the score.
    """
    n = len(snapshot.node_union)
    if n == 0:
        raise EmptySnapshot("graph stability is undefined without nodes")
    m = len(snapshot.link_union)
    speed_sum = sum(_node_mean_speeds(snapshot).values())
    distance_sum = sum(_link_mean_distances(snapshot).values())
    if speed_inverse:
        return m * m / (n * distance_sum + speed_sum + eps)
    return (m * m * speed_sum) / (n * distance_sum + eps)


def _frame_graph_stability(
    frame: TimestampedGraph, eps: float, speed_inverse: bool
) -> float:
    n = len(frame.present_nodes)
    if n == 0:
        return 0.0
    m = len(frame.links)
    speed_sum = sum(frame.speeds.values())
    distance_sum = sum(
        link_distance(frame.positions[a], frame.positions[b]) for a, b in frame.links
    )
    if speed_inverse:
        return m * m / (n * distance_sum + speed_sum + eps)
    return (m * m * speed_sum) / (n * distance_sum + eps)


@dataclass(frozen=True)
class IndicatorSeries:
    """Per-frame indicator values for a snapshot's detail charts."""

    timestamps: tuple[float, ...]
    node_speed: tuple[float, ...]
    node_degree: tuple[float, ...]
    link_distance: tuple[float, ...]
    link_stability: tuple[float, ...]
    graph_stability: tuple[float, ...]


@dataclass(frozen=True)
class SnapshotIndicators:
    """Frame-averaged scalars plus the per-frame series behind them.

    Averages over empty sets are 0 by convention; ``graph_stability`` is the
    snapshot-level value (union topology with per-frame attribute means),
    not the mean of the per-frame series.
    """

    avg_node_speed: float
    avg_node_degree: float
    avg_link_distance: float
    avg_link_stability: float
    graph_stability: float
    per_frame: IndicatorSeries


def snapshot_indicators(
    snapshot: Snapshot,
    eps: float = DEFAULT_EPS,
    speed_inverse: bool = False,
) -> SnapshotIndicators:
    """Compute all indicator scalars and per-frame series for a snapshot."""
    speeds: list[float] = []
    degrees: list[float] = []
    distances: list[float] = []
    stabilities: list[float] = []
    frame_graph: list[float] = []
    for frame in snapshot.frames:
        present = frame.present_nodes
        speeds.append(fmean(frame.speeds.values()) if present else 0.0)
        degrees.append(2 * len(frame.links) / len(present) if present else 0.0)
        if frame.links:
            frame_distances = [
                link_distance(frame.positions[a], frame.positions[b])
                for a, b in frame.links
            ]
            distances.append(fmean(frame_distances))
            stabilities.append(
                fmean(
                    link_stability(frame.speeds[a], frame.speeds[b], d, eps)
                    for (a, b), d in zip(frame.links, frame_distances)
                )
            )
        else:
            distances.append(0.0)
            stabilities.append(0.0)
        frame_graph.append(_frame_graph_stability(frame, eps, speed_inverse))
    series = IndicatorSeries(
        timestamps=tuple(frame.timestamp for frame in snapshot.frames),
        node_speed=tuple(speeds),
        node_degree=tuple(degrees),
        link_distance=tuple(distances),
        link_stability=tuple(stabilities),
        graph_stability=tuple(frame_graph),
    )
    overall = graph_stability(snapshot, eps, speed_inverse)
    return SnapshotIndicators(
        avg_node_speed=fmean(speeds),
        avg_node_degree=fmean(degrees),
        avg_link_distance=fmean(distances),
        avg_link_stability=fmean(stabilities),
        graph_stability=overall,
        per_frame=series,
    )
